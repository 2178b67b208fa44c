"""Closed-form ARQ error probabilities with and without list decoding.

All probabilities come from the weight distribution evaluated at
``(1 - p, p)``. Sums over weights are taken term by term, so quantities
such as the undetected-error probability are never formed as a difference
of two nearly equal numbers.
"""

import csv
import io
from dataclasses import dataclass, fields
from typing import Optional

from .weights import weight_enumerator_eval

CSV_HEADER = ("p", "P_c", "P_ue", "P_list", "Pe_arq", "Pe_arq_list", "P_b", "list_size")


def _check_p(p):
    if not 0.0 <= p <= 0.5:
        raise ValueError("crossover probability must lie in [0, 0.5], got %r" % (p,))


def _min_distance(dist):
    d = dist.min_distance
    if d is None:
        raise ValueError("the zero code has no minimum distance")
    return d


def p_list(dist, p):
    """Probability that an undetected error is still list-decoded correctly.

    This is the probability that the channel turns the sent word into one of
    the ``A_d`` codewords at the minimum distance: ``A_d p^d (1-p)^(n-d)``.
    """
    _check_p(p)
    d = _min_distance(dist)
    return weight_enumerator_eval(dist, 1.0 - p, p, weights=[d])


@dataclass(frozen=True)
class ArqAnalysis:
    p: float
    P_c: float
    P_ue: float
    P_list: float
    P_ue_list: float
    Pe_arq: float
    Pe_arq_list: float
    P_b: Optional[float]
    list_size: int

    def csv_row(self):
        return [_fmt(self.p), _fmt(self.P_c), _fmt(self.P_ue), _fmt(self.P_list),
                _fmt(self.Pe_arq), _fmt(self.Pe_arq_list), _fmt(self.P_b),
                str(self.list_size)]


def _fmt(v):
    if v is None:
        return ""
    return "%.10g" % v


def arq_metrics(dist, p):
    _check_p(p)
    d = _min_distance(dist)
    n = dist.n
    x, y = 1.0 - p, p
    P_c = x ** n
    P_ue = weight_enumerator_eval(dist, x, y, weights=range(1, n + 1))
    P_list = weight_enumerator_eval(dist, x, y, weights=[d])
    P_ue_list = weight_enumerator_eval(dist, x, y, weights=range(d + 1, n + 1))
    accept = weight_enumerator_eval(dist, x, y)
    return ArqAnalysis(
        p=p,
        P_c=P_c,
        P_ue=P_ue,
        P_list=P_list,
        P_ue_list=P_ue_list,
        Pe_arq=P_ue / accept,
        Pe_arq_list=P_ue_list / accept,
        P_b=P_list / P_ue if P_ue > 0 else None,
        list_size=dist[d] + 1,
    )


def sweep(dist, p_grid):
    return [arq_metrics(dist, p) for p in p_grid]


def sweep_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(row.csv_row())
    return buf.getvalue()


def as_dict(a):
    return {f.name: getattr(a, f.name) for f in fields(a)}
