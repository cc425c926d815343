"""Reader for Web of Science field-tagged exports.

The "plain text" export format looks like::

    FN Clarivate Analytics Web of Science
    VR 1.0
    PT J
    TI A paper about electrochemical
       biosensors
    DE Biosensor; Breast Cancer
    PY 2015
    UT WOS:000123456700001
    ER

    PT J
    ...
    ER
    EF

Every line starts with a two-character tag; lines indented with three
spaces continue the previous tag.  A record runs from ``PT`` to ``ER``
and the file ends with ``EF``.  ``FN``/``VR`` header lines are file
metadata, not record fields.

Only the fields this pipeline consumes are lifted into
:class:`WosRecord`; every other tag is kept verbatim in ``extras`` so
round-tripping a file through JSON loses nothing.

A tab-delimited export (one header row of tags, one row per record) can
be read with :func:`parse_wos_tab_delimited`; it produces the same
:class:`Corpus` type.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field, asdict
from pathlib import Path

# Tags consumed into WosRecord fields.  WE carries the Web of Science
# edition (e.g. SCI-EXPANDED) in exports that include it.
_FIELD_TAGS = ("UT", "DT", "PT", "TI", "LA", "PY", "WE", "DE")

_TAG_RE = re.compile(r"^[A-Z][A-Z0-9]( |$)")
_CONTINUATION_PREFIX = "   "

YEAR_MIN = 1900
YEAR_MAX = 2100


class MalformedRecord(Exception):
    """Structural problem in a field-tagged export (strict mode only)."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class EncodingError(Exception):
    """Input file is not valid UTF-8."""


@dataclass
class WosRecord:
    record_id: str
    doc_type: str = ""
    title: str = ""
    language: str = ""
    pub_year: int | None = None
    source_index: str = ""
    author_keywords: list[str] = field(default_factory=list)
    extras: dict[str, list[str]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "WosRecord":
        return cls(
            record_id=data["record_id"],
            doc_type=data.get("doc_type", ""),
            title=data.get("title", ""),
            language=data.get("language", ""),
            pub_year=data.get("pub_year"),
            source_index=data.get("source_index", ""),
            author_keywords=list(data.get("author_keywords", [])),
            extras={k: list(v) for k, v in data.get("extras", {}).items()},
        )


@dataclass
class Corpus:
    label: str
    records: list[WosRecord] = field(default_factory=list)

    def __post_init__(self):
        if not self.label:
            raise ValueError("corpus label must be non-empty")
        seen = set()
        for rec in self.records:
            if rec.record_id in seen:
                raise ValueError(f"duplicate record_id {rec.record_id!r}")
            seen.add(rec.record_id)

    def __len__(self) -> int:
        return len(self.records)

    def to_dict(self) -> dict:
        return {
            "format": "coword-corpus/1",
            "label": self.label,
            "records": [rec.to_dict() for rec in self.records],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Corpus":
        return cls(
            label=data["label"],
            records=[WosRecord.from_dict(r) for r in data.get("records", [])],
        )


@dataclass
class FilterCriteria:
    """Record filter.  Unset (None or empty) fields match everything."""

    doc_types: frozenset[str] | None = None
    languages: frozenset[str] | None = None
    year_min: int | None = None
    year_max: int | None = None
    indices: frozenset[str] | None = None
    require_keywords: bool = False

    def __post_init__(self):
        for name in ("doc_types", "languages", "indices"):
            value = getattr(self, name)
            if value is not None:
                setattr(self, name, frozenset(v.casefold() for v in value))
        if (
            self.year_min is not None
            and self.year_max is not None
            and self.year_min > self.year_max
        ):
            raise ValueError(f"year_min {self.year_min} > year_max {self.year_max}")

    @classmethod
    def from_dict(cls, data: dict) -> "FilterCriteria":
        return cls(
            doc_types=frozenset(data["doc_types"]) if data.get("doc_types") else None,
            languages=frozenset(data["languages"]) if data.get("languages") else None,
            year_min=data.get("year_min"),
            year_max=data.get("year_max"),
            indices=frozenset(data["indices"]) if data.get("indices") else None,
            require_keywords=bool(data.get("require_keywords", False)),
        )

    def matches(self, record: WosRecord) -> bool:
        if self.doc_types and not _parts(record.doc_type) & self.doc_types:
            return False
        if self.languages and not _parts(record.language) & self.languages:
            return False
        if self.year_min is not None or self.year_max is not None:
            if record.pub_year is None:
                return False
            if self.year_min is not None and record.pub_year < self.year_min:
                return False
            if self.year_max is not None and record.pub_year > self.year_max:
                return False
        if self.indices and not _parts(record.source_index) & self.indices:
            return False
        if self.require_keywords and not record.author_keywords:
            return False
        return True


def _parts(value: str) -> set[str]:
    # WOS packs multi-valued fields as "Article; Proceedings Paper".
    return {p.strip().casefold() for p in value.split(";") if p.strip()}


def _is_tag_line(line: str) -> bool:
    return bool(_TAG_RE.match(line))


def parse_wos_export(
    text: str, label: str = "corpus", strict: bool = False
) -> tuple[Corpus, list[str]]:
    """Parse a field-tagged export into a Corpus plus diagnostics.

    With ``strict=False`` any text yields a corpus: malformed lines and
    records are skipped and reported in the diagnostics list.  With
    ``strict=True`` the first structural problem raises
    :class:`MalformedRecord`.
    """
    diagnostics: list[str] = []

    def problem(line_number: int, message: str):
        if strict:
            raise MalformedRecord(line_number, message)
        diagnostics.append(f"line {line_number}: {message}")

    records: list[WosRecord] = []
    seen_keys: set = set()
    fields: dict[str, list[str]] | None = None  # None = outside a record
    current_tag = ""
    record_start_line = 0
    ordinal = 0

    def finish_record(end_line: int):
        nonlocal fields
        assert fields is not None
        record = _build_record(fields, ordinal, end_line, problem)
        key = (
            ("ut", fields["UT"][0].strip())
            if "UT" in fields
            else ("title-year", record.title.casefold(), record.pub_year)
        )
        if key in seen_keys:
            diagnostics.append(
                f"line {record_start_line}: duplicate record "
                f"{record.record_id!r} dropped (first occurrence kept)"
            )
        else:
            seen_keys.add(key)
            records.append(record)
        fields = None

    lines = text.splitlines()
    ended = False
    for idx, line in enumerate(lines, start=1):
        if ended:
            if line.strip():
                problem(idx, "content after EF marker ignored")
                break
            continue
        if not line.strip():
            current_tag = ""
            continue
        if line.startswith(_CONTINUATION_PREFIX) and not _is_tag_line(line):
            if fields is None or not current_tag:
                problem(idx, "continuation line without a preceding tag (skipped)")
                continue
            fields[current_tag].append(line[len(_CONTINUATION_PREFIX):].strip())
            continue
        if not _is_tag_line(line):
            problem(idx, f"unrecognized line (skipped): {line[:40]!r}")
            continue

        tag, value = line[:2], line[3:].strip()
        if fields is None:
            if tag == "PT":
                ordinal += 1
                fields = {"PT": [value]}
                current_tag = "PT"
                record_start_line = idx
            elif tag in ("FN", "VR"):
                continue  # file header
            elif tag == "EF":
                ended = True
            else:
                problem(idx, f"tag {tag} before any record start (skipped)")
            continue

        if tag == "ER":
            finish_record(idx)
            current_tag = ""
        elif tag == "EF":
            problem(idx, "EF inside a record (record skipped)")
            fields = None
            ended = True
        else:
            fields.setdefault(tag, []).append(value)
            current_tag = tag

    if fields is not None:
        problem(len(lines), "end of input inside a record (record skipped)")

    return Corpus(label=label, records=records), diagnostics


def _build_record(fields, ordinal, line_number, problem) -> WosRecord:
    def joined(tag: str) -> str:
        return " ".join(v for v in fields.get(tag, []) if v).strip()

    pub_year: int | None = None
    raw_year = joined("PY")
    if raw_year:
        try:
            pub_year = int(raw_year)
        except ValueError:
            pub_year = None
        if pub_year is not None and not (YEAR_MIN <= pub_year <= YEAR_MAX):
            pub_year = None
        if pub_year is None:
            problem(line_number, f"unusable PY value {raw_year!r} (year dropped)")

    keywords = [k.strip() for k in joined("DE").split(";")]
    keywords = [k for k in keywords if k]

    record_id = joined("UT") or f"REC-{ordinal}"
    extras = {
        tag: list(values) for tag, values in fields.items() if tag not in _FIELD_TAGS
    }
    return WosRecord(
        record_id=record_id,
        doc_type=joined("DT") or joined("PT"),
        title=joined("TI"),
        language=joined("LA"),
        pub_year=pub_year,
        source_index=joined("WE"),
        author_keywords=keywords,
        extras=extras,
    )


def parse_wos_tab_delimited(
    text: str, label: str = "corpus", strict: bool = False
) -> tuple[Corpus, list[str]]:
    """Parse a tab-delimited export (header row of tags, one record per row)."""
    diagnostics: list[str] = []
    reader = csv.reader(io.StringIO(text), delimiter="\t")
    try:
        header = next(reader)
    except StopIteration:
        return Corpus(label=label), diagnostics
    header = [h.strip().lstrip("﻿") for h in header]

    records: list[WosRecord] = []
    seen_keys: set = set()
    ordinal = 0
    for row_number, row in enumerate(reader, start=2):
        if not any(cell.strip() for cell in row):
            continue
        if len(row) > len(header):
            message = f"row {row_number}: more cells than header columns"
            if strict:
                raise MalformedRecord(row_number, message)
            diagnostics.append(f"line {row_number}: {message} (row skipped)")
            continue
        ordinal += 1
        fields = {
            tag: [cell.strip()]
            for tag, cell in zip(header, row)
            if tag and cell.strip()
        }
        record = _build_record(
            fields,
            ordinal,
            row_number,
            lambda ln, msg: diagnostics.append(f"line {ln}: {msg}"),
        )
        key = (
            ("ut", fields["UT"][0])
            if "UT" in fields
            else ("title-year", record.title.casefold(), record.pub_year)
        )
        if key in seen_keys:
            diagnostics.append(
                f"line {row_number}: duplicate record {record.record_id!r} dropped"
            )
            continue
        seen_keys.add(key)
        records.append(record)
    return Corpus(label=label, records=records), diagnostics


def read_wos_file(
    path: str | Path, label: str = "corpus", strict: bool = False
) -> tuple[Corpus, list[str]]:
    """Read a file, sniffing field-tagged vs tab-delimited layout."""
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"{path}: not valid UTF-8 ({exc})") from exc
    for line in text.splitlines():
        if line.strip():
            if "\t" in line:
                return parse_wos_tab_delimited(text, label=label, strict=strict)
            break
    return parse_wos_export(text, label=label, strict=strict)


def filter_corpus(corpus: Corpus, criteria: FilterCriteria) -> Corpus:
    """Keep records satisfying all criteria fields; order preserved."""
    return Corpus(
        label=corpus.label,
        records=[r for r in corpus.records if criteria.matches(r)],
    )


def save_corpus(corpus: Corpus, path: str | Path):
    Path(path).write_text(
        json.dumps(corpus.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)
        + "\n",
        encoding="utf-8",
    )


def load_corpus(path: str | Path) -> Corpus:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return Corpus.from_dict(data)
