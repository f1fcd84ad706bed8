"""On-disk moment-table cache, keyed by (params, precision, method) hash.

Enabled when HP_CACHE_DIR is set (or a directory is passed explicitly);
values round-trip exactly through the mpf tuple encoding.
"""

from __future__ import annotations

import hashlib
import json
import os
from typing import Optional

import mpmath
from mpmath import mpc

from .precision import mpf_from_json, mpf_to_json
from .weight import MomentTable, WeightParams, moment_table


def cache_dir(explicit: Optional[str] = None) -> Optional[str]:
    d = explicit or os.environ.get("HP_CACHE_DIR")
    if d:
        os.makedirs(d, exist_ok=True)
    return d


def _table_key(params: WeightParams, jmax: int, prec: int, method: str,
               jmin: int) -> str:
    blob = json.dumps({
        "v": 1, "n": int(params.n), "t": str(params.t),
        "alpha": str(params.alpha), "delta": str(params.delta),
        "jmin": jmin, "jmax": jmax, "prec": prec, "method": method,
    }, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:32]


def cached_moment_table(params: WeightParams, jmax: int, prec: int,
                        method: str = "auto", jmin: int = -1,
                        directory: Optional[str] = None) -> MomentTable:
    d = cache_dir(directory)
    if not d:
        return moment_table(params, jmax, prec, method=method, jmin=jmin)
    key = _table_key(params, jmax, prec, method, jmin)
    path = os.path.join(d, f"moments-{key}.json")
    if os.path.exists(path):
        with open(path) as fh:
            data = json.load(fh)
        table = MomentTable(params=params, prec=prec, method=data["method"],
                            jmin=jmin, jmax=jmax)
        for sj, (re, im, err) in data["mu"].items():
            j = int(sj)
            table.mu[j] = mpmath.make_mpc((mpf_from_json(re)._mpf_,
                                           mpf_from_json(im)._mpf_))
            table.err[j] = mpf_from_json(err)
        return table
    table = moment_table(params, jmax, prec, method=method, jmin=jmin)
    data = {"method": table.method, "mu": {}}
    for j in range(jmin, jmax + 1):
        v = table.mu[j]
        data["mu"][str(j)] = [mpf_to_json(mpmath.re(v)),
                              mpf_to_json(mpmath.im(v)),
                              mpf_to_json(table.err[j])]
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(data, fh)
    os.replace(tmp, path)
    return table
