"""Keyword normalization: case/whitespace/hyphen/plural folding plus
exact-match synonym and abbreviation rules loaded from a CSV file.
"""

from __future__ import annotations

import csv
import dataclasses
import io
from dataclasses import dataclass, field
from importlib import resources

from .wos import Corpus

RULE_KINDS = (
    "case_fold",
    "hyphen_fold",
    "plural_fold",
    "synonym_merge",
    "abbreviation_expand",
)
_LOOKUP_KINDS = ("synonym_merge", "abbreviation_expand")

# A validated lexicon converges in two passes; the cap only matters
# while load_lexicon is still vetting the rules.
MAX_PASSES = 5


class LexiconError(Exception):
    pass


class RuleCycle(LexiconError):
    pass


class DuplicatePattern(LexiconError):
    pass


class EmptyAfterNormalization(LexiconError):
    def __init__(self, raw: str):
        super().__init__(f"keyword {raw!r} reduced to an empty string")
        self.raw = raw


@dataclass(frozen=True)
class NormalizationRule:
    kind: str
    pattern: str = ""
    replacement: str = ""

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise LexiconError(f"unknown rule kind {self.kind!r}")
        if self.kind in _LOOKUP_KINDS and (not self.pattern or not self.replacement):
            raise LexiconError(
                f"{self.kind} rules need both a pattern and a replacement"
            )


BUILTIN_RULES = (
    NormalizationRule("case_fold"),
    NormalizationRule("hyphen_fold"),
    NormalizationRule("plural_fold", pattern="s"),
)


@dataclass
class Lexicon:
    rules: list[NormalizationRule] = field(default_factory=lambda: list(BUILTIN_RULES))
    plural_exceptions: frozenset[str] = frozenset()
    # Derived lookup structures, built in __post_init__.
    lookup: dict[str, str] = field(init=False, repr=False)
    dehyphen_targets: frozenset[str] = field(init=False, repr=False)

    def __post_init__(self):
        seen: set[tuple[str, str]] = set()
        lookup: dict[str, str] = {}
        targets: set[str] = set()
        for rule in self.rules:
            key = (rule.kind, rule.pattern)
            if key in seen:
                raise DuplicatePattern(
                    f"two {rule.kind} rules share the pattern {rule.pattern!r}"
                )
            seen.add(key)
            if rule.kind in _LOOKUP_KINDS:
                # Overlapping patterns across the two lookup kinds are
                # resolved by order: the earliest rule wins.
                lookup.setdefault(rule.pattern, rule.replacement)
                for text in (rule.pattern, rule.replacement):
                    targets.add(text)
                    targets.update(text.split())
        self.lookup = lookup
        self.dehyphen_targets = frozenset(targets)


def _canonical_text(value: str) -> str:
    return " ".join(value.casefold().split())


def _fold_hyphens(token: str, targets: frozenset[str]) -> str:
    if "-" not in token:
        return token
    chars = []
    for i, ch in enumerate(token):
        if (
            ch == "-"
            and 0 < i < len(token) - 1
            and token[i - 1].isalpha()
            and token[i + 1].isalpha()
        ):
            continue
        chars.append(ch)
    candidate = "".join(chars)
    # Hyphens are kept unless the joined form is a known word: merging
    # blindly would corrupt ids like "mcf-7".
    if candidate != token and candidate in targets:
        return candidate
    return token


def _fold_plural(token: str, exceptions: frozenset[str]) -> str:
    if (
        len(token) > 3
        and token.endswith("s")
        and not token.endswith(("ss", "us", "is"))
        and token not in exceptions
    ):
        return token[:-1]
    return token


def _normalize_once(lexicon: Lexicon, value: str) -> str:
    value = _canonical_text(value)
    if not value:
        return ""
    tokens = [_fold_hyphens(t, lexicon.dehyphen_targets) for t in value.split(" ")]
    tokens[-1] = _fold_plural(tokens[-1], lexicon.plural_exceptions)
    value = " ".join(tokens)
    return lexicon.lookup.get(value, value)


def normalize_keyword(lexicon: Lexicon, raw: str) -> str:
    """Return the canonical form of one author keyword.

    The folding stages run in a fixed order (case, whitespace, hyphen,
    plural, lookup) and the whole pipeline is repeated until the string
    stops changing, so normalize(normalize(x)) == normalize(x) holds for
    any input.
    """
    current = raw
    for _ in range(MAX_PASSES):
        step = _normalize_once(lexicon, current)
        if step == current:
            break
        current = step
    else:
        raise RuleCycle(
            f"normalization of {raw!r} did not settle within {MAX_PASSES} passes"
        )
    if not current:
        raise EmptyAfterNormalization(raw)
    return current


def normalize_corpus(lexicon: Lexicon, corpus: Corpus) -> tuple[Corpus, list[str]]:
    """Normalize every record's keywords; duplicates within a record are
    dropped (first occurrence wins), empty results are reported."""
    diagnostics: list[str] = []
    records = []
    for record in corpus.records:
        canonical: list[str] = []
        seen: set[str] = set()
        for raw in record.author_keywords:
            try:
                keyword = normalize_keyword(lexicon, raw)
            except EmptyAfterNormalization:
                diagnostics.append(
                    f"record {record.record_id}: keyword {raw!r} empty "
                    "after normalization (dropped)"
                )
                continue
            if keyword not in seen:
                seen.add(keyword)
                canonical.append(keyword)
        records.append(dataclasses.replace(record, author_keywords=canonical))
    return dataclasses.replace(corpus, records=records), diagnostics


def load_lexicon(text: str) -> Lexicon:
    """Parse a rules CSV (header ``kind,pattern,replacement``, ``#``
    comments allowed) and validate it.

    plural_fold rows list words exempt from plural folding.  Load fails
    with DuplicatePattern on repeated (kind, pattern) pairs and with
    RuleCycle when a replacement is itself rewritten by the rule set, so
    a validated lexicon is guaranteed idempotent.
    """
    data_lines = [
        line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")
    ]
    rules = list(BUILTIN_RULES)
    exceptions: set[str] = set()
    if data_lines:
        reader = csv.reader(io.StringIO("\n".join(data_lines)))
        header = next(reader)
        if [h.strip().casefold() for h in header[:3]] != ["kind", "pattern", "replacement"]:
            raise LexiconError("rules file must start with header kind,pattern,replacement")
        for row_number, row in enumerate(reader, start=2):
            if not row or not any(cell.strip() for cell in row):
                continue
            row = [cell.strip() for cell in row] + [""] * (3 - len(row))
            kind, pattern, replacement = row[0], _canonical_text(row[1]), _canonical_text(row[2])
            if kind not in RULE_KINDS:
                raise LexiconError(f"row {row_number}: unknown rule kind {kind!r}")
            if kind in ("case_fold", "hyphen_fold") and (pattern or replacement):
                raise LexiconError(
                    f"row {row_number}: {kind} is structural and takes no pattern"
                )
            if kind == "plural_fold":
                if not pattern or replacement:
                    raise LexiconError(
                        f"row {row_number}: plural_fold rows list one exempt word"
                    )
                exceptions.add(pattern)
                continue
            if kind in _LOOKUP_KINDS and (not pattern or not replacement):
                raise LexiconError(
                    f"row {row_number}: {kind} needs pattern and replacement"
                )
            rules.append(NormalizationRule(kind, pattern, replacement))

    lexicon = Lexicon(rules=rules, plural_exceptions=frozenset(exceptions))
    _validate_replacements(lexicon)
    return lexicon


def _validate_replacements(lexicon: Lexicon):
    for rule in lexicon.rules:
        if rule.kind not in _LOOKUP_KINDS:
            continue
        try:
            settled = normalize_keyword(lexicon, rule.replacement)
        except RuleCycle as exc:
            raise RuleCycle(
                f"rules for {rule.pattern!r} form a rewrite cycle"
            ) from exc
        if settled != rule.replacement:
            raise RuleCycle(
                f"replacement {rule.replacement!r} of pattern {rule.pattern!r} "
                f"is itself rewritten to {settled!r}; use the settled form"
            )


def load_lexicon_file(path) -> Lexicon:
    from pathlib import Path

    return load_lexicon(Path(path).read_text(encoding="utf-8"))


def default_lexicon() -> Lexicon:
    text = resources.files("coword_atlas").joinpath("data/default_rules.csv").read_text(
        encoding="utf-8"
    )
    return load_lexicon(text)
