"""Multi-attempt learning-curve statistics.

Attempts 1-6 are grouped into three phases (initial 1-2, improvement 3-4,
advanced 5-6). Means are computed over completed attempts only; DNF rows are
counted separately. The shipped fixture `fixtures/reference_attempts.csv` carries
the reference dataset of 10 users x 6 attempts.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

PHASES: tuple[tuple[str, tuple[int, int]], ...] = (
    ("initial", (1, 2)),
    ("improvement", (3, 4)),
    ("advanced", (5, 6)),
)


class AnalyticsError(ValueError):
    """Malformed attempt dataset."""


@dataclass(frozen=True)
class AttemptRecord:
    user: str
    attempt: int  # 1..6
    time_s: float | None  # None = DNF


@dataclass(frozen=True)
class AttemptDataset:
    rows: tuple[AttemptRecord, ...]


@dataclass(frozen=True)
class PhaseStats:
    phase: str
    completed: int
    dnf: int
    mean_s: float | None  # over completed attempts; None if no completions
    per_user_best: tuple[tuple[str, float], ...]  # best completed time per user


@dataclass(frozen=True)
class UserTrend:
    user: str
    first_s: float | None
    last_s: float | None
    delta_s: float | None  # last - first; None when < 2 completions
    flagged: bool


def load_attempts(text: str) -> AttemptDataset:
    """Parse `user,attempt,time_s` CSV; time_s is a number or DNF."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise AnalyticsError("empty CSV") from None
    if [h.strip().lower() for h in header] != ["user", "attempt", "time_s"]:
        raise AnalyticsError(f"expected header user,attempt,time_s, got {header}")

    rows: list[AttemptRecord] = []
    seen: set[tuple[str, int]] = set()
    for lineno, raw in enumerate(reader, start=2):
        if not raw or all(not c.strip() for c in raw):
            continue
        if len(raw) != 3:
            raise AnalyticsError(f"line {lineno}: expected 3 columns, got {len(raw)}")
        user = raw[0].strip()
        if not user:
            raise AnalyticsError(f"line {lineno}: empty user id")
        try:
            attempt = int(raw[1])
        except ValueError:
            raise AnalyticsError(f"line {lineno}: bad attempt number {raw[1]!r}") from None
        if not 1 <= attempt <= 6:
            raise AnalyticsError(f"line {lineno}: attempt {attempt} outside 1..6")
        key = (user, attempt)
        if key in seen:
            raise AnalyticsError(f"line {lineno}: duplicate row for {user} attempt {attempt}")
        seen.add(key)
        t_raw = raw[2].strip()
        if t_raw.upper() == "DNF":
            time_s: float | None = None
        else:
            try:
                time_s = float(t_raw)
            except ValueError:
                raise AnalyticsError(f"line {lineno}: bad time {t_raw!r}") from None
        rows.append(AttemptRecord(user, attempt, time_s))
    return AttemptDataset(tuple(rows))


def phase_stats(ds: AttemptDataset) -> list[PhaseStats]:
    """Per-phase completion count, DNF count and mean over completions."""
    if not ds.rows:
        raise AnalyticsError("empty dataset")
    out = []
    for name, (lo, hi) in PHASES:
        in_phase = [r for r in ds.rows if lo <= r.attempt <= hi]
        completed = [r for r in in_phase if r.time_s is not None]
        best: dict[str, float] = {}
        for r in completed:
            if r.user not in best or r.time_s < best[r.user]:
                best[r.user] = r.time_s
        mean = sum(r.time_s for r in completed) / len(completed) if completed else None
        out.append(PhaseStats(
            phase=name,
            completed=len(completed),
            dnf=len(in_phase) - len(completed),
            mean_s=mean,
            per_user_best=tuple(sorted(best.items())),
        ))
    return out


def per_user_trend(ds: AttemptDataset) -> list[UserTrend]:
    """First/last completed time per user; users with < 2 completions flagged."""
    users = sorted({r.user for r in ds.rows})
    out = []
    for user in users:
        completed = sorted((r for r in ds.rows if r.user == user and r.time_s is not None),
                           key=lambda r: r.attempt)
        if len(completed) < 2:
            only = completed[0].time_s if completed else None
            out.append(UserTrend(user, only, only, None, True))
        else:
            first, last = completed[0].time_s, completed[-1].time_s
            out.append(UserTrend(user, first, last, last - first, False))
    return out


def emit_plot_data(stats: list[PhaseStats]) -> str:
    """Plot-ready CSV: phase,completed,dnf,mean_s (mean empty when undefined)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["phase", "completed", "dnf", "mean_s"])
    for st in stats:
        writer.writerow([st.phase, st.completed, st.dnf,
                         "" if st.mean_s is None else repr(st.mean_s)])
    return buf.getvalue()


def parse_plot_data(text: str) -> list[tuple[str, int, int, float | None]]:
    """Inverse of emit_plot_data, for roundtrip checks."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != ["phase", "completed", "dnf", "mean_s"]:
        raise AnalyticsError(f"bad plot CSV header {header}")
    return [(row[0], int(row[1]), int(row[2]), float(row[3]) if row[3] else None)
            for row in reader if row]
