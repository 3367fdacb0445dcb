#!/usr/bin/env python3
"""Regenerate the shipped symbol registry data file.

The recognition inventory is a fixed table; this script exists so the
shipped file stays reproducible and internally consistent. Run from the
repository root:

    python scripts/gen_registry.py

Inventory layout (390 labels total):
  13  independent vowels
   1  visarga
   2  context-ambiguous glyph classes (anusvara/zero, nine/arkaa)
   4  resolved readings of those classes (anusvara, 0, 9, arkaa)
   8  Kannada digits 1-8
   3  detached vowel marks (length mark, vocalic-r sign, ai mark)
   3  specials (avagraha, danda, double danda)
  10  Arabic digits
  15  punctuation
   6  letterpress part characters (aa, u, uu, o, au, halant)
   6  fused ottu complexes
 319  consonant units: 34 modern consonants x 9 forms (base, aa, i, u,
      uu, e, o, pure, ottu) plus reduced rows for the two archaic
      letters (rra: base, aa, i, u, e, pure, ottu; llla: base, aa, i,
      e, pure, ottu); vowel forms without a fused glyph are written
      with the detached marks/parts instead.
"""

from __future__ import annotations

from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "kannada_ocr" / "script" / "data" / "registry_v1.txt"

CONSONANTS = [
    ("ka", 0x0C95), ("kha", 0x0C96), ("ga", 0x0C97), ("gha", 0x0C98), ("nga", 0x0C99),
    ("ca", 0x0C9A), ("cha", 0x0C9B), ("ja", 0x0C9C), ("jha", 0x0C9D), ("nya", 0x0C9E),
    ("tta", 0x0C9F), ("ttha", 0x0CA0), ("dda", 0x0CA1), ("ddha", 0x0CA2), ("nna", 0x0CA3),
    ("ta", 0x0CA4), ("tha", 0x0CA5), ("da", 0x0CA6), ("dha", 0x0CA7), ("na", 0x0CA8),
    ("pa", 0x0CAA), ("pha", 0x0CAB), ("ba", 0x0CAC), ("bha", 0x0CAD), ("ma", 0x0CAE),
    ("ya", 0x0CAF), ("ra", 0x0CB0), ("la", 0x0CB2), ("va", 0x0CB5), ("sha", 0x0CB6),
    ("ssa", 0x0CB7), ("sa", 0x0CB8), ("ha", 0x0CB9), ("lla", 0x0CB3),
    # Archaic letters used by Halegannada books.
    ("rra", 0x0CB1), ("llla", 0x0CDE),
]

INDEPENDENT_VOWELS = [
    ("a", 0x0C85), ("aa", 0x0C86), ("i", 0x0C87), ("ii", 0x0C88), ("u", 0x0C89),
    ("uu", 0x0C8A), ("Ru", 0x0C8B), ("e", 0x0C8E), ("ee", 0x0C8F), ("ai", 0x0C90),
    ("o", 0x0C92), ("oo", 0x0C93), ("au", 0x0C94),
]

VOWEL_SIGNS = {
    "aa": 0x0CBE, "i": 0x0CBF, "ii": 0x0CC0, "u": 0x0CC1, "uu": 0x0CC2,
    "Ru": 0x0CC3, "e": 0x0CC6, "ee": 0x0CC7, "ai": 0x0CC8, "o": 0x0CCA,
    "oo": 0x0CCB, "au": 0x0CCC,
}
VIRAMA = 0x0CCD

# Fused consonant-vowel forms present as single glyph classes. Everything
# else is written with a detached mark or letterpress part.
FUSED_VOWELS = {"default": ["aa", "i", "u", "uu", "e", "o"],
                "rra": ["aa", "i", "u", "e"],
                "llla": ["aa", "i", "e"]}

PUNCTUATION = [
    ("dot", "."), ("comma", ","), ("lquote", "‘"), ("rquote", "’"),
    ("apostrophe", "'"), ("hyphen", "-"), ("question", "?"), ("lparen", "("),
    ("rparen", ")"), ("lbracket", "["), ("rbracket", "]"), ("colon", ":"),
    ("semicolon", ";"), ("exclaim", "!"), ("slash", "/"),
]

COMPLEXES = [
    ("kRu_ottu", ["ka_ottu", "Ru_mark"]),
    ("ttra_ottu", ["tta_ottu", "ra_ottu"]),
    ("tra_ottu", ["ta_ottu", "ra_ottu"]),
    ("pra_ottu", ["pa_ottu", "ra_ottu"]),
    ("vra_ottu", ["va_ottu", "ra_ottu"]),
    ("rai_ottu", ["ra_ottu", "ai_mark"]),
]

RESOLVE = [
    ("none", "aa", "aa"), ("none", "u", "u"), ("none", "uu", "uu"),
    ("none", "o", "o"), ("none", "au", "au"), ("none", "Ru", "Ru"),
    ("i", "dheergha", "ii"), ("e", "dheergha", "ee"), ("o", "dheergha", "oo"),
    ("e", "ai", "ai"),
]


def cv_name(cons: str, vowel: str) -> str:
    return cons[:-1] + vowel


def hexseq(*cps: int) -> str:
    return ",".join(f"{cp:04X}" for cp in cps)


def main() -> None:
    lines = ["# Kannada OCR symbol registry. Regenerate with scripts/gen_registry.py.",
             "# label <id> <name> <role> <codepoints> [key=value ...]",
             "# combine <left> <right> <result> / complex <name> <members...> /",
             "# resolve <prev-vowel> <mark> <out-vowel>",
             "version 1"]
    labels: list[str] = []
    next_id = 1

    def add(name: str, role: str, cps: str, **attrs: str) -> None:
        nonlocal next_id
        parts = [f"label {next_id} {name} {role} {cps}"]
        parts += [f"{k}={v}" for k, v in attrs.items()]
        labels.append(" ".join(parts))
        next_id += 1

    for name, cp in INDEPENDENT_VOWELS:
        add(name, "independent_vowel", hexseq(cp))
    add("visarga", "visarga", hexseq(0x0C83))
    add("am0", "anusvara_or_zero", hexseq(0x0C82), as_text="anusvara", as_digit="kn0")
    add("nine_arkaa", "nine_or_arkaa", hexseq(0x0CEF), as_text="arkaa", as_digit="kn9")
    add("anusvara", "anusvara_or_zero", hexseq(0x0C82), resolved="1")
    add("kn0", "kannada_digit", hexseq(0x0CE6), resolved="1")
    add("kn9", "kannada_digit", hexseq(0x0CEF), resolved="1")
    add("arkaa", "arkaa_mark", hexseq(0x0CB0, VIRAMA), resolved="1")
    for d in range(1, 9):
        add(f"kn{d}", "kannada_digit", hexseq(0x0CE6 + d))
    add("dheergha", "dheergha", hexseq(0x0CD5))
    add("Ru_mark", "vowel_modifier_part", hexseq(0x0CC3), vowel="Ru")
    add("ai_mark", "vowel_modifier_part", hexseq(0x0CD6), vowel="ai")
    add("avagraha", "special", hexseq(0x0CBD))
    add("danda", "special", hexseq(0x0964))
    add("double_danda", "special", hexseq(0x0965))
    for d in range(10):
        add(f"d{d}", "arabic_digit", hexseq(ord("0") + d))
    for name, ch in PUNCTUATION:
        add(name, "punctuation", hexseq(ord(ch)))
    for vowel in ["aa", "u", "uu", "o", "au"]:
        add(f"{vowel}_part", "vowel_modifier_part", hexseq(VOWEL_SIGNS[vowel]), vowel=vowel)
    add("halant_part", "vowel_modifier_part", hexseq(VIRAMA), vowel="halant")
    for name, members in COMPLEXES:
        # Nominal code points: concatenation of the members' sequences.
        cps = {"kRu_ottu": hexseq(VIRAMA, 0x0C95, 0x0CC3),
               "ttra_ottu": hexseq(VIRAMA, 0x0C9F, VIRAMA, 0x0CB0),
               "tra_ottu": hexseq(VIRAMA, 0x0CA4, VIRAMA, 0x0CB0),
               "pra_ottu": hexseq(VIRAMA, 0x0CAA, VIRAMA, 0x0CB0),
               "vra_ottu": hexseq(VIRAMA, 0x0CB5, VIRAMA, 0x0CB0),
               "rai_ottu": hexseq(VIRAMA, 0x0CB0, 0x0CD6)}[name]
        add(name, "ottu_complex", cps)

    combine: list[str] = []
    for cons, cp in CONSONANTS:
        fused = FUSED_VOWELS.get(cons, FUSED_VOWELS["default"])
        add(cons, "consonant_vowel", hexseq(cp), cons=cons)
        for vowel in fused:
            add(cv_name(cons, vowel), "consonant_vowel", hexseq(cp, VOWEL_SIGNS[vowel]),
                cons=cons, vowel=vowel)
        add(f"{cons}_pure", "pure_consonant", hexseq(cp, VIRAMA), cons=cons)
        add(f"{cons}_ottu", "ottu", hexseq(VIRAMA, cp), cons=cons)
        for vowel in ["aa", "u", "uu", "o"]:
            if vowel in fused:
                combine.append(f"combine {cons} {vowel}_part {cv_name(cons, vowel)}")
        combine.append(f"combine {cons} halant_part {cons}_pure")

    lines += labels
    lines += combine
    for name, members in COMPLEXES:
        lines.append("complex " + name + " " + " ".join(members))
    for vp, mark, vo in RESOLVE:
        lines.append(f"resolve {vp} {mark} {vo}")

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({len(labels)} labels)")


if __name__ == "__main__":
    main()
