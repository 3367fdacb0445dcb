"""Kannada script codec: recognized symbol streams <-> Unicode text.

All operations work on label ids from a loaded :class:`SymbolRegistry`.
The forward direction (``word_unicode``) turns one word's classifier labels
into Unicode: part characters are merged, context-ambiguous glyphs are
resolved, symbols are grouped into aksharas, and each akshara is emitted
with the two reorderings the script needs (arkaa to the front, the first
unit's dependent vowel to the end). The reverse direction
(``unicode_to_symbols``) maps text back to the symbol stream a printed
page would contain; it is the transform used for bigram extraction.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

from ..errors import OrphanAttacher, UnresolvablePair, UnsupportedCodePoint
from .registry import ANUSVARA, VIRAMA, VISARGA, VOWEL_SIGNS, SymbolLabel, SymbolRegistry

LETTER_ROLES = frozenset({
    "independent_vowel", "consonant_vowel", "pure_consonant", "ottu",
    "ottu_complex", "visarga",
})
CONSONANT_BEARING_ROLES = frozenset({
    "consonant_vowel", "pure_consonant", "ottu", "ottu_complex",
})
DIGIT_ROLES = frozenset({"kannada_digit", "arabic_digit"})

# Dependent vowels without a fused consonant glyph split into a simpler
# fused form plus a detached mark.
_MARK_SPLIT = {
    "ii": ("i", "dheergha"),
    "ee": ("e", "dheergha"),
    "oo": ("o", "dheergha"),
    "ai": ("e", "ai_mark"),
    "Ru": (None, "Ru_mark"),
    "au": (None, "au_part"),
}
_PART_NAMES = {"aa": "aa_part", "u": "u_part", "uu": "uu_part", "o": "o_part"}


@dataclass
class Akshara:
    """One orthographic syllable: a starter label plus attached labels."""

    members: list[SymbolLabel]
    end_vowel: str | None = field(default=None)  # filled by akshara_unicode


def combine_parts(registry: SymbolRegistry, ids: list[int]) -> list[int]:
    """Merge adjacent (base, part-character) pairs in one left-to-right pass."""
    out: list[int] = []
    i = 0
    while i < len(ids):
        if i + 1 < len(ids) and (ids[i], ids[i + 1]) in registry.combine_table:
            out.append(registry.combine_table[(ids[i], ids[i + 1])])
            i += 2
        else:
            out.append(ids[i])
            i += 1
    return out


def disambiguate(registry: SymbolRegistry, ids: list[int]) -> list[int]:
    """Resolve the anusvara/zero and nine/arkaa glyphs from word context."""
    labs = [registry.label(i) for i in ids]
    has_letters = any(l.role in LETTER_ROLES for l in labs)

    def is_digit(lab: SymbolLabel | None) -> bool:
        return lab is not None and lab.role in DIGIT_ROLES

    out: list[int] = []
    for idx, lab in enumerate(labs):
        if lab.resolved or (lab.as_text is None and lab.as_digit is None):
            out.append(lab.id)
            continue
        prev = registry.label(out[-1]) if out else None
        nxt = labs[idx + 1] if idx + 1 < len(labs) else None
        if lab.role == "anusvara_or_zero":
            digit_context = is_digit(prev) or is_digit(nxt) or not has_letters
            out.append(lab.as_digit if digit_context else lab.as_text)
        elif lab.role == "nine_or_arkaa":
            # Arkaa only attaches to a consonant cluster; scan back over
            # vowel marks to find what this glyph follows.
            j = len(out) - 1
            while j >= 0 and registry.label(out[j]).role in ("dheergha", "vowel_modifier_part"):
                j -= 1
            before = registry.label(out[j]) if j >= 0 else None
            if before is not None and before.role in CONSONANT_BEARING_ROLES:
                out.append(lab.as_text)
            else:
                out.append(lab.as_digit)
        else:
            out.append(lab.id)
    return out


def group_aksharas(registry: SymbolRegistry, ids: list[int]) -> list[Akshara]:
    """Partition a label stream into aksharas; attachers join the previous one."""
    aksharas: list[Akshara] = []
    for lid in ids:
        lab = registry.label(lid)
        if lab.is_attacher:
            if not aksharas:
                raise OrphanAttacher(f"attaching symbol {lab.name!r} at word start")
            aksharas[-1].members.append(lab)
        else:
            aksharas.append(Akshara(members=[lab]))
    return aksharas


def resolve_vowel_sign(registry: SymbolRegistry, v_prev: str | None, v_mark: str) -> str:
    """Combine the pending dependent vowel with a detached mark (Table lookup)."""
    key = ("none" if v_prev is None else v_prev, v_mark)
    try:
        return registry.resolve_table[key]
    except KeyError:
        raise UnresolvablePair(f"no resolution for vowel {key[0]!r} + mark {v_mark!r}") from None


def _mark_kind(lab: SymbolLabel) -> str:
    return "dheergha" if lab.role == "dheergha" else (lab.vowel or "")


def akshara_unicode(registry: SymbolRegistry, akshara: Akshara) -> str:
    """Unicode for one akshara, applying the script's two reorderings."""
    members = akshara.members
    first = members[0]
    out: list[str] = []
    pending: str | None = None
    explicit_halant = False
    arkaa: SymbolLabel | None = None

    if first.role == "consonant_vowel":
        out.append(first.unicode_seq[0])  # bare consonant; vowel moves to the end
        pending = first.vowel
    else:
        out.append(first.unicode_seq)

    def attach(lab: SymbolLabel) -> None:
        nonlocal pending, explicit_halant, arkaa
        if lab.role == "ottu":
            out.append(lab.unicode_seq)
        elif lab.role == "ottu_complex":
            for member_id in registry.complex_table[lab.id]:
                attach(registry.label(member_id))
        elif lab.role == "arkaa_mark":
            arkaa = lab
        elif lab.role == "dheergha" or lab.role == "vowel_modifier_part":
            kind = _mark_kind(lab)
            if kind == "halant":
                explicit_halant = True
            else:
                pending = resolve_vowel_sign(registry, pending, kind)
        else:
            out.append(lab.unicode_seq)

    for lab in members[1:]:
        attach(lab)

    akshara.end_vowel = pending
    if pending is not None:
        out.append(VOWEL_SIGNS[pending])
    if explicit_halant:
        out.append(VIRAMA)
    if arkaa is not None:
        out.insert(0, arkaa.unicode_seq)
    return "".join(out)


def word_unicode(registry: SymbolRegistry, ids: list[int]) -> str:
    """Full forward transform for one word's label stream."""
    if not ids:
        return ""
    combined = combine_parts(registry, ids)
    resolved = disambiguate(registry, combined)
    aksharas = group_aksharas(registry, resolved)
    text = "".join(akshara_unicode(registry, a) for a in aksharas)
    return unicodedata.normalize("NFC", text)


# --- reverse transform ------------------------------------------------------


def _char_tables(registry: SymbolRegistry) -> dict:
    cache = getattr(registry, "_codec_tables", None)
    if cache is not None:
        return cache
    consonants: dict[str, str] = {}
    for lab in registry.labels.values():
        if lab.role == "consonant_vowel" and lab.vowel is None and lab.cons:
            consonants[lab.unicode_seq] = lab.cons
    independents = {lab.unicode_seq: lab.id for lab in registry.labels.values()
                    if lab.role == "independent_vowel"}
    sign_to_vowel = {cp: v for v, cp in VOWEL_SIGNS.items()}
    simple: dict[str, int] = {}
    for lab in registry.labels.values():
        if lab.role in ("arabic_digit", "punctuation", "special") and len(lab.unicode_seq) == 1:
            simple[lab.unicode_seq] = lab.id
    kn_digits = {}
    for lab in registry.labels.values():
        if lab.role == "kannada_digit":
            kn_digits[lab.unicode_seq] = lab.id
    # The zero and nine glyphs are ambiguous classes; text containing those
    # digits maps back to the ambiguous class the classifier would emit.
    kn_digits["೦"] = registry.name("am0").id
    kn_digits["೯"] = registry.name("nine_arkaa").id
    cache = {
        "consonants": consonants,
        "independents": independents,
        "signs": sign_to_vowel,
        "simple": simple,
        "kn_digits": kn_digits,
        "am0": registry.name("am0").id,
        "nine_arkaa": registry.name("nine_arkaa").id,
        "visarga": registry.name("visarga").id,
    }
    registry._codec_tables = cache  # type: ignore[attr-defined]
    return cache


def _first_unit(registry: SymbolRegistry, cons: str, vowel: str | None,
                position: int) -> tuple[list[int], list[int]]:
    """Units for the cluster-initial consonant: (main units, trailing marks)."""
    if vowel is None:
        return [registry.cv_unit(cons, None).id], []
    fused = registry.cv_unit(cons, vowel)
    if fused is not None:
        return [fused.id], []
    if vowel in _MARK_SPLIT:
        base_vowel, mark = _MARK_SPLIT[vowel]
        main = registry.cv_unit(cons, base_vowel)
        if main is not None:
            return [main.id], [registry.name(mark).id]
        if base_vowel in _PART_NAMES:  # e.g. archaic letters lacking a fused o-form
            return ([registry.cv_unit(cons, None).id],
                    [registry.name(_PART_NAMES[base_vowel]).id, registry.name(mark).id])
    if vowel in _PART_NAMES:
        return [registry.cv_unit(cons, None).id], [registry.name(_PART_NAMES[vowel]).id]
    raise UnsupportedCodePoint(
        f"no printable form for consonant {cons!r} with vowel {vowel!r}",
        position=position)


def _cluster_units(registry: SymbolRegistry, cluster: list[str], vowel: str | None,
                   trailing_halant: bool, position: int) -> list[int]:
    if len(cluster) == 1 and trailing_halant and vowel is None:
        pure = registry.pure_unit(cluster[0])
        if pure is not None:
            return [pure.id]
        return [registry.cv_unit(cluster[0], None).id, registry.name("halant_part").id]
    if cluster[0] == "ra" and len(cluster) >= 2:
        # Cluster-initial /r/ prints as the arkaa mark after the rest.
        rest = _cluster_units(registry, cluster[1:], vowel, trailing_halant, position)
        return rest + [_char_tables(registry)["nine_arkaa"]]
    main, marks = _first_unit(registry, cluster[0], vowel, position)
    units = list(main)
    for cons in cluster[1:]:
        ottu = registry.ottu_unit(cons)
        if ottu is None:
            raise UnsupportedCodePoint(
                f"consonant {cons!r} has no conjunct form", position=position)
        units.append(ottu.id)
    units.extend(marks)
    if trailing_halant:
        units.append(registry.name("halant_part").id)
    return units


def unicode_to_symbols(registry: SymbolRegistry, text: str) -> list[int]:
    """Map Unicode text for one word to the printed-symbol label stream.

    Inverse of :func:`word_unicode` on its image. Unsupported code points
    raise :class:`UnsupportedCodePoint` with the offending position.
    """
    text = unicodedata.normalize("NFC", text)
    t = _char_tables(registry)
    out: list[int] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in t["consonants"]:
            cluster = [t["consonants"][ch]]
            start = i
            i += 1
            while i + 1 < n and text[i] == VIRAMA and text[i + 1] in t["consonants"]:
                cluster.append(t["consonants"][text[i + 1]])
                i += 2
            trailing_halant = False
            if i < n and text[i] == VIRAMA:
                trailing_halant = True
                i += 1
            vowel = None
            if not trailing_halant and i < n and text[i] in t["signs"]:
                vowel = t["signs"][text[i]]
                i += 1
            out.extend(_cluster_units(registry, cluster, vowel, trailing_halant, start))
        elif ch in t["independents"]:
            out.append(t["independents"][ch])
            i += 1
        elif ch == ANUSVARA:
            out.append(t["am0"])
            i += 1
        elif ch == VISARGA:
            out.append(t["visarga"])
            i += 1
        elif ch in t["kn_digits"]:
            out.append(t["kn_digits"][ch])
            i += 1
        elif ch in t["simple"]:
            out.append(t["simple"][ch])
            i += 1
        else:
            raise UnsupportedCodePoint(
                f"unsupported code point U+{ord(ch):04X} at position {i}",
                codepoint=ch, position=i)
    return out


def decompose_letterpress(registry: SymbolRegistry, ids: list[int]) -> list[int]:
    """Rewrite fused units as (base, part) pairs where the combine table
    allows it -- the symbol stream an old letterpress page would show."""
    out: list[int] = []
    for lid in ids:
        pair = registry.decompose_table.get(lid)
        if pair is not None:
            out.extend(pair)
        else:
            out.append(lid)
    return out


def fuse_complexes(registry: SymbolRegistry, ids: list[int]) -> list[int]:
    """Replace member runs with their fused ottu-complex label where one exists."""
    expansions = sorted(registry.complex_table.items(),
                        key=lambda kv: -len(kv[1]))
    out = list(ids)
    for cid, members in expansions:
        members = list(members)
        i = 0
        while i + len(members) <= len(out):
            if out[i:i + len(members)] == members:
                out[i:i + len(members)] = [cid]
            i += 1
    return out
