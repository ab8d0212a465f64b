import statistics
from typing import Sequence


def percent(fraction: float) -> float:
    return round(fraction * 100, 2)


def mean(values: Sequence[float]) -> float:
    return statistics.fmean(values) if values else 0.0


def population_stddev(values: Sequence[float]) -> float:
    return statistics.pstdev(values) if len(values) > 1 else 0.0


def median(values: Sequence[float]) -> float:
    return statistics.median(values) if values else 0.0


def readable_duration(seconds: float) -> str:
    minutes, seconds = divmod(seconds, 60)
    if minutes:
        return f"{int(minutes)}m {seconds:.1f}s"
    return f"{seconds:.2f}s"
