"""Versioned JSON serialisation of ensembles."""
from __future__ import annotations

import json
from typing import IO

from ..cfcore import Alphabet
from ..errors import DomainError
from .build import Ensemble
from .params import Mode, compute_params
from .pre import PreEnsemble

FORMAT_VERSION = 1


def ensemble_to_dict(e: Ensemble) -> dict:
    p = e.params
    return {
        "format": FORMAT_VERSION,
        "params": {
            "N": p.N,
            "eps0": p.eps0,
            "J": p.J,
            "alphabet": list(p.alphabet.letters),
            "mode": {"kind": p.mode.kind, "scale": p.mode.scale},
        },
        "factors": [
            {"M": f.M, "L": f.L, "p": f.p, "k": f.k, "members": [list(w) for w in f.members]}
            for f in e.factors
        ],
    }


def ensemble_from_dict(data: dict) -> Ensemble:
    """Rebuild an ensemble; the ladder is recomputed and J must match."""
    if data.get("format") != FORMAT_VERSION:
        raise DomainError(f"unsupported ensemble format {data.get('format')!r}")
    pd = data["params"]
    alphabet = Alphabet(tuple(pd["alphabet"]))
    mode = Mode(pd["mode"]["kind"], pd["mode"]["scale"])
    params = compute_params(int(pd["N"]), float(pd["eps0"]), alphabet, mode)
    if params.J != pd["J"]:
        raise DomainError(f"stored J={pd['J']} disagrees with recomputed J={params.J}")
    factors = tuple(
        PreEnsemble(
            M=float(f["M"]),
            L=float(f["L"]),
            p=int(f["p"]),
            k=int(f["k"]),
            members=tuple(tuple(int(d) for d in w) for w in f["members"]),
            alphabet=alphabet,
        )
        for f in data["factors"]
    )
    return Ensemble(params, factors, tuple(f.L / f.M for f in factors), tuple(f.M for f in factors))


def dump_ensemble(e: Ensemble, fh: IO[str]) -> None:
    json.dump(ensemble_to_dict(e), fh, separators=(",", ":"))
    fh.write("\n")


def load_ensemble(fh: IO[str]) -> Ensemble:
    return ensemble_from_dict(json.load(fh))
