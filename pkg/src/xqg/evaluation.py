"""Recall at m kilo-tokens and paired significance testing.

The metric walks each query's retrieved passages in rank order, truncates
the concatenated text at a token budget, and scores 1 when any gold answer
(after NFKC normalization, lowercasing and whitespace collapsing) appears
as a substring. Recall is reported per language plus the unweighted mean
across languages. Significance uses a paired two-tailed t-test over the
per-query success bits with Bonferroni correction; the Student-t tail
probability is computed with a continued-fraction incomplete beta, so no
statistics package is required at runtime.
"""

from __future__ import annotations

import json
import math
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .core import EvalQuery, LanguageTag, Passage, RankedList

__all__ = [
    "LanguageResult",
    "MetricReport",
    "Comparison",
    "SignificanceReport",
    "normalize_for_match",
    "recall_at_kilotokens",
    "paired_t_test",
    "bonferroni",
    "render_table",
    "write_report_json",
]


def normalize_for_match(text: str) -> str:
    """NFKC, lowercase, collapse runs of whitespace to single spaces."""
    return " ".join(unicodedata.normalize("NFKC", text).lower().split())


def metric_name(m_tokens: int) -> str:
    if m_tokens % 1000 == 0:
        return f"R@{m_tokens // 1000}kt"
    return f"R@{m_tokens}t"


@dataclass(frozen=True)
class LanguageResult:
    """Per-language outcome: mean recall plus the per-query success bits."""

    recall: float
    successes: tuple[tuple[str, int], ...]  # (qid, 0/1) in query order

    def __post_init__(self) -> None:
        if self.successes:
            mean = sum(s for _, s in self.successes) / len(self.successes)
            if abs(mean - self.recall) > 1e-12:
                raise ValueError(
                    f"LanguageResult: recall {self.recall} does not equal mean success {mean}"
                )


@dataclass(frozen=True)
class MetricReport:
    """Recall per language and the unweighted average across languages."""

    name: str
    per_language: Mapping[LanguageTag, LanguageResult]
    average: float

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "per_language",
            dict(sorted(self.per_language.items())),
        )
        if self.per_language:
            mean = sum(r.recall for r in self.per_language.values()) / len(self.per_language)
            if abs(mean - self.average) > 1e-12:
                raise ValueError(
                    f"MetricReport: average {self.average} does not equal language mean {mean}"
                )

    def successes_for(self, lang: LanguageTag) -> tuple[int, ...]:
        return tuple(s for _, s in self.per_language[lang].successes)

    def to_json_dict(self) -> dict:
        return {
            "metric": self.name,
            "per_language": {
                lang.code: {
                    "recall": result.recall,
                    "successes": [[qid, s] for qid, s in result.successes],
                }
                for lang, result in self.per_language.items()
            },
            "average": self.average,
        }


def recall_at_kilotokens(
    run: Sequence[RankedList],
    corpus: Mapping[str, Passage] | Sequence[Passage],
    queries: Sequence[EvalQuery],
    m_tokens: int,
) -> MetricReport:
    """Fraction of queries whose answer appears in the first m tokens retrieved.

    Retrieved passage texts are concatenated in rank order (single-space
    joined), tokenized by whitespace, and cut at the token budget; the
    passage straddling the budget is cut at a token boundary. Queries with
    no run entries score 0.
    """
    if m_tokens < 1:
        raise ValueError(f"m_tokens: must be >= 1, got {m_tokens}")
    lookup: Mapping[str, Passage]
    if isinstance(corpus, Mapping):
        lookup = corpus
    else:
        lookup = {p.id: p for p in corpus}
    known_qids = {q.qid for q in queries}
    by_qid: dict[str, RankedList] = {}
    for rl in run:
        if rl.qid not in known_qids:
            raise ValueError(f"run contains unknown qid {rl.qid!r}")
        by_qid[rl.qid] = rl

    by_lang: dict[LanguageTag, list[tuple[str, int]]] = {}
    for q in queries:
        success = 0
        rl = by_qid.get(q.qid)
        if rl is not None:
            tokens: list[str] = []
            for pid, _score in rl.entries:
                passage = lookup.get(pid)
                if passage is None:
                    raise ValueError(f"run for qid {q.qid!r} names unknown passage {pid!r}")
                tokens.extend(passage.text.split())
                if len(tokens) >= m_tokens:
                    break
            window = normalize_for_match(" ".join(tokens[:m_tokens]))
            for answer in q.answers:
                if normalize_for_match(answer) in window:
                    success = 1
                    break
        by_lang.setdefault(q.lang, []).append((q.qid, success))

    per_language = {
        lang: LanguageResult(
            recall=sum(s for _, s in items) / len(items),
            successes=tuple(items),
        )
        for lang, items in by_lang.items()
    }
    average = (
        sum(r.recall for r in per_language.values()) / len(per_language)
        if per_language
        else 0.0
    )
    return MetricReport(name=metric_name(m_tokens), per_language=per_language, average=average)


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    MAXIT, EPS, FPMIN = 300, 3e-16, 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def _reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b), accurate to ~1e-14."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_bt = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    bt = math.exp(ln_bt)
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _betacf(a, b, x) / a
    return 1.0 - bt * _betacf(b, a, 1.0 - x) / b


def student_t_two_tailed_p(t: float, df: int) -> float:
    """Two-tailed tail probability of Student's t with df degrees of freedom."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    return _reg_inc_beta(df / 2.0, 0.5, df / (df + t * t))


def paired_t_test(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """Paired two-tailed t-test on the element-wise differences.

    Zero-variance differences return (0.0, 1.0) by convention.
    """
    if len(a) != len(b):
        raise ValueError(f"paired_t_test: length mismatch ({len(a)} vs {len(b)})")
    n = len(a)
    if n < 2:
        raise ValueError(f"paired_t_test: need at least 2 pairs, got {n}")
    diffs = [float(x) - float(y) for x, y in zip(a, b)]
    mean = sum(diffs) / n
    var = sum((d - mean) ** 2 for d in diffs) / (n - 1)
    if var == 0.0:
        return 0.0, 1.0
    t = mean / math.sqrt(var / n)
    return t, student_t_two_tailed_p(t, n - 1)


def bonferroni(p_values: Sequence[float], num_comparisons: int) -> list[float]:
    """Correct p-values for a family of comparisons: min(1, p * n)."""
    if num_comparisons < 1:
        raise ValueError(f"num_comparisons: must be >= 1, got {num_comparisons}")
    out = []
    for p in p_values:
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"p-value out of [0, 1]: {p}")
        out.append(min(1.0, p * num_comparisons))
    return out


@dataclass(frozen=True)
class Comparison:
    label: str
    t_statistic: float
    p_raw: float
    p_corrected: float
    significant: bool


@dataclass(frozen=True)
class SignificanceReport:
    """Bonferroni-corrected paired comparisons at the 0.05 level."""

    comparisons: tuple[Comparison, ...]
    num_comparisons: int

    def __post_init__(self) -> None:
        for c in self.comparisons:
            expected = min(1.0, c.p_raw * self.num_comparisons)
            if abs(c.p_corrected - expected) > 1e-12:
                raise ValueError(
                    f"SignificanceReport: comparison {c.label!r} has p_corrected "
                    f"{c.p_corrected}, expected {expected}"
                )

    @classmethod
    def from_pairs(
        cls,
        labelled_pairs: Iterable[tuple[str, Sequence[float], Sequence[float]]],
        num_comparisons: int,
        level: float = 0.05,
    ) -> "SignificanceReport":
        """Run paired t-tests for (label, treatment, baseline) triples."""
        comparisons = []
        for label, treatment, baseline in labelled_pairs:
            t, p = paired_t_test(treatment, baseline)
            (p_corr,) = bonferroni([p], num_comparisons)
            comparisons.append(
                Comparison(
                    label=label,
                    t_statistic=t,
                    p_raw=p,
                    p_corrected=p_corr,
                    significant=p_corr < level,
                )
            )
        return cls(comparisons=tuple(comparisons), num_comparisons=num_comparisons)

    def to_json_dict(self) -> dict:
        return {
            "num_comparisons": self.num_comparisons,
            "comparisons": [
                {
                    "label": c.label,
                    "t_statistic": c.t_statistic,
                    "p_raw": c.p_raw,
                    "p_corrected": c.p_corrected,
                    "significant": c.significant,
                }
                for c in self.comparisons
            ],
        }


def render_table(rows: Sequence[tuple[str, MetricReport]]) -> str:
    """Plain-text results table: languages as columns, one row per model/run."""
    if not rows:
        return ""
    langs = sorted({lang for _, report in rows for lang in report.per_language})
    headers = ["Model"] + [lang.code for lang in langs] + ["Average"]
    body: list[list[str]] = []
    for label, report in rows:
        cells = [label]
        for lang in langs:
            result = report.per_language.get(lang)
            cells.append(f"{100.0 * result.recall:.1f}" if result else "-")
        cells.append(f"{100.0 * report.average:.1f}")
        body.append(cells)
    widths = [
        max(len(headers[c]), *(len(r[c]) for r in body)) for c in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
    ]
    for r in body:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def write_report_json(
    path: str | Path,
    metrics: Sequence[MetricReport],
    significance: SignificanceReport | None = None,
) -> None:
    payload: dict = {"metrics": [m.to_json_dict() for m in metrics]}
    if significance is not None:
        payload["significance"] = significance.to_json_dict()
    Path(path).write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
