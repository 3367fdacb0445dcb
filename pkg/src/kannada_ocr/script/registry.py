"""Symbol registry: the recognition-unit inventory of the Kannada codec.

The registry is a versioned plain-text data file. Each ``label`` line
declares one recognition unit (id, mnemonic name, role, nominal code
points, attributes); ``combine`` lines pair a base unit with a letterpress
part character; ``complex`` lines expand fused multi-ottu glyphs into
their member units; ``resolve`` lines give the vowel-sign combination
table (previous vowel + detached mark -> resulting vowel).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..errors import DanglingReference, MalformedRegistry

ROLES = frozenset({
    "independent_vowel", "consonant_vowel", "pure_consonant", "ottu",
    "ottu_complex", "vowel_modifier_part", "dheergha", "arkaa_mark",
    "anusvara_or_zero", "nine_or_arkaa", "visarga", "kannada_digit",
    "arabic_digit", "punctuation", "special",
})

# Roles that attach to the previous akshara instead of starting a new one.
ATTACHER_ROLES = frozenset({
    "ottu", "ottu_complex", "vowel_modifier_part", "dheergha", "arkaa_mark",
})

DEPENDENT_VOWELS = ("aa", "i", "ii", "u", "uu", "Ru", "e", "ee", "ai", "o", "oo", "au")

VOWEL_SIGNS = {
    "aa": "ಾ", "i": "ಿ", "ii": "ೀ", "u": "ು",
    "uu": "ೂ", "Ru": "ೃ", "e": "ೆ", "ee": "ೇ",
    "ai": "ೈ", "o": "ೊ", "oo": "ೋ", "au": "ೌ",
}
VIRAMA = "್"
ANUSVARA = "ಂ"
VISARGA = "ಃ"


@dataclass(frozen=True)
class SymbolLabel:
    """One recognition unit of the inventory."""

    id: int
    name: str
    role: str
    unicode_seq: str
    cons: str | None = None       # consonant mnemonic for consonant units
    vowel: str | None = None      # dependent vowel / mark kind
    resolved: bool = False        # resolution target, never a classifier class
    as_text: int | None = None    # ambiguous class: label id of the text reading
    as_digit: int | None = None   # ambiguous class: label id of the digit reading

    @property
    def is_attacher(self) -> bool:
        return self.role in ATTACHER_ROLES

    @property
    def trainable(self) -> bool:
        """True when the label names a glyph class the classifier emits."""
        return not self.resolved


@dataclass
class SymbolRegistry:
    """Loaded inventory plus combination/expansion/resolution tables."""

    labels: dict[int, SymbolLabel]
    by_name: dict[str, SymbolLabel]
    combine_table: dict[tuple[int, int], int]
    complex_table: dict[int, tuple[int, ...]]
    resolve_table: dict[tuple[str, str], str]
    decompose_table: dict[int, tuple[int, int]] = field(init=False)

    def __post_init__(self) -> None:
        # Reverse of the combine table: fused unit -> (base, part).
        self.decompose_table = {res: pair for pair, res in self.combine_table.items()}

    def label(self, label_id: int) -> SymbolLabel:
        return self.labels[label_id]

    def name(self, name: str) -> SymbolLabel:
        return self.by_name[name]

    def ids(self) -> list[int]:
        return sorted(self.labels)

    def trainable_ids(self) -> list[int]:
        return sorted(lid for lid, lab in self.labels.items() if lab.trainable)

    def cv_unit(self, cons: str, vowel: str | None) -> SymbolLabel | None:
        """Fused consonant(+vowel) unit, or None when no fused glyph exists."""
        key = cons if vowel is None else cons[:-1] + vowel
        lab = self.by_name.get(key)
        if lab is not None and lab.role == "consonant_vowel" and lab.cons == cons:
            return lab
        return None

    def ottu_unit(self, cons: str) -> SymbolLabel | None:
        return self.by_name.get(f"{cons}_ottu")

    def pure_unit(self, cons: str) -> SymbolLabel | None:
        return self.by_name.get(f"{cons}_pure")

    def punctuation_label(self, char: str) -> SymbolLabel | None:
        for lab in self.labels.values():
            if lab.role == "punctuation" and lab.unicode_seq == char:
                return lab
        return None


def _parse_attrs(tokens: list[str], line_no: int) -> dict[str, str]:
    attrs = {}
    for tok in tokens:
        if "=" not in tok:
            raise MalformedRegistry(f"line {line_no}: bad attribute {tok!r}")
        k, v = tok.split("=", 1)
        attrs[k] = v
    return attrs


def load_registry(path: str | Path | None = None) -> SymbolRegistry:
    """Load and validate a registry file. ``None`` loads the shipped one."""
    if path is None:
        text = resources.files("kannada_ocr.script").joinpath("data/registry_v1.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")

    raw_labels: list[tuple[int, str, str, str, dict[str, str]]] = []
    raw_combine: list[tuple[int, str, str, str]] = []
    raw_complex: list[tuple[int, str, list[str]]] = []
    resolve_table: dict[tuple[str, str], str] = {}
    version = None

    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "version":
            if len(tokens) != 2 or tokens[1] != "1":
                raise MalformedRegistry(f"line {line_no}: unsupported registry version")
            version = 1
        elif kind == "label":
            if len(tokens) < 5:
                raise MalformedRegistry(f"line {line_no}: truncated label entry")
            try:
                lid = int(tokens[1])
            except ValueError as exc:
                raise MalformedRegistry(f"line {line_no}: bad label id") from exc
            raw_labels.append((lid, tokens[2], tokens[3], tokens[4],
                               _parse_attrs(tokens[5:], line_no)))
        elif kind == "combine":
            if len(tokens) != 4:
                raise MalformedRegistry(f"line {line_no}: combine needs 3 names")
            raw_combine.append((line_no, tokens[1], tokens[2], tokens[3]))
        elif kind == "complex":
            if len(tokens) < 3:
                raise MalformedRegistry(f"line {line_no}: complex needs members")
            raw_complex.append((line_no, tokens[1], tokens[2:]))
        elif kind == "resolve":
            if len(tokens) != 4:
                raise MalformedRegistry(f"line {line_no}: resolve needs 3 fields")
            resolve_table[(tokens[1], tokens[2])] = tokens[3]
        else:
            raise MalformedRegistry(f"line {line_no}: unknown record {kind!r}")

    if version is None or not raw_labels:
        raise MalformedRegistry("registry file has no version header or no labels")

    by_name: dict[str, SymbolLabel] = {}
    labels: dict[int, SymbolLabel] = {}
    pending_refs: list[tuple[int, str, str, str]] = []
    for lid, name, role, cps, attrs in raw_labels:
        if role not in ROLES:
            raise MalformedRegistry(f"label {name}: unknown role {role!r}")
        if lid in labels:
            raise MalformedRegistry(f"duplicate label id {lid}")
        if name in by_name:
            raise MalformedRegistry(f"duplicate label name {name!r}")
        try:
            seq = "".join(chr(int(h, 16)) for h in cps.split(",")) if cps != "-" else ""
        except ValueError as exc:
            raise MalformedRegistry(f"label {name}: bad code points {cps!r}") from exc
        if not seq:
            raise MalformedRegistry(f"label {name}: empty code point sequence")
        lab = SymbolLabel(
            id=lid, name=name, role=role, unicode_seq=seq,
            cons=attrs.get("cons"), vowel=attrs.get("vowel"),
            resolved=attrs.get("resolved") == "1",
        )
        labels[lid] = lab
        by_name[name] = lab
        for key in ("as_text", "as_digit"):
            if key in attrs:
                pending_refs.append((lid, name, key, attrs[key]))

    def resolve_name(owner: str, ref: str) -> int:
        if ref not in by_name:
            raise DanglingReference(f"{owner}: reference to unknown label {ref!r}")
        return by_name[ref].id

    for lid, name, key, ref in pending_refs:
        target = resolve_name(f"label {name}", ref)
        old = labels[lid]
        labels[lid] = SymbolLabel(
            id=old.id, name=old.name, role=old.role, unicode_seq=old.unicode_seq,
            cons=old.cons, vowel=old.vowel, resolved=old.resolved,
            as_text=target if key == "as_text" else old.as_text,
            as_digit=target if key == "as_digit" else old.as_digit,
        )
        by_name[name] = labels[lid]

    combine_table: dict[tuple[int, int], int] = {}
    for line_no, left, right, result in raw_combine:
        key = (resolve_name(f"combine line {line_no}", left),
               resolve_name(f"combine line {line_no}", right))
        combine_table[key] = resolve_name(f"combine line {line_no}", result)

    complex_table: dict[int, tuple[int, ...]] = {}
    for line_no, name, members in raw_complex:
        owner = resolve_name(f"complex line {line_no}", name)
        if labels[owner].role != "ottu_complex":
            raise MalformedRegistry(f"complex {name}: label is not an ottu_complex")
        complex_table[owner] = tuple(resolve_name(f"complex {name}", m) for m in members)

    for lid, lab in labels.items():
        if lab.role == "ottu_complex" and lid not in complex_table:
            raise MalformedRegistry(f"ottu_complex {lab.name} has no expansion")

    for (vp, mark), vo in resolve_table.items():
        if vp != "none" and vp not in DEPENDENT_VOWELS:
            raise MalformedRegistry(f"resolve: unknown previous vowel {vp!r}")
        if vo not in DEPENDENT_VOWELS:
            raise MalformedRegistry(f"resolve: unknown output vowel {vo!r}")

    return SymbolRegistry(labels=labels, by_name=by_name, combine_table=combine_table,
                          complex_table=complex_table, resolve_table=resolve_table)
