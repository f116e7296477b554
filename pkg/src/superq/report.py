"""Structure reports: one deterministic JSON document per algebra."""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dfield

from . import exactla as la
from . import dercoh, repn, rootsys, structure
from .liealg import SuperLieAlgebra, subalgebra

SECTIONS = ("structure", "dercoh", "rootsys", "repn")

# root-datum checks that are consistency conditions (the rest are reported facts)
_ROOT_GATES = ("bookkeeping", "zero_space_is_h", "eigen", "additivity", "even_negation_stable")


@dataclass
class StructureReport:
    data: dict
    gates: dict = dfield(default_factory=dict)

    @property
    def ok(self):
        return all(v is not False for v in self.gates.values())

    def failed(self):
        return sorted(k for k, v in self.gates.items() if v is False)

    def dumps(self):
        d = dict(self.data, ok=self.ok, failed_checks=self.failed())
        return json.dumps(d, sort_keys=True, indent=1)


def _spec_json(g):
    spec = getattr(g, "spec", None)
    return spec.to_json() if spec is not None else None


def build(g: SuperLieAlgebra, seed=0, skip=()) -> StructureReport:
    """Report on g; ``skip`` names sections among structure, dercoh, rootsys, repn."""
    bad = set(skip) - set(SECTIONS)
    if bad:
        raise ValueError(f"unknown sections {sorted(bad)}")
    data = {"name": g.name, "spec": _spec_json(g), "field": g.field.to_json(),
            "dim": list(g.sdim), "seed": seed, "skipped": sorted(skip)}
    gates = {}
    val = g.validate()
    data["validation"] = val.summary()
    gates["validation"] = val.ok
    if not val.ok:
        return StructureReport(data, gates)

    qr = structure.is_quasireductive(g)
    data["quasireductive"] = qr.to_json()
    simple = repn.is_simple(repn.adjoint(g), seed).simple is True
    data["simple"] = simple

    filt = None
    if "structure" not in skip and qr.quasireductive:
        filt = structure.canonical_filtration(g, seed)
        data["filtration"] = filt.to_json()
        for k, v in filt.checks.items():
            gates[f"filtration.{k}"] = v

    if "dercoh" not in skip:
        D = dercoh.derivations(g)
        data["derivations"] = D.to_json()
        H = dercoh.h2_restricted(g) if qr.quasireductive else None
        if H is not None:
            f = dercoh.h2_restricted_formula(g)
            data["h2_restricted"] = {"dim": H.dim, "formula_dim": f}
            gates["h2_restricted.formula"] = H.dim == f
        data["h2"] = list(dercoh.h2_trivial(g, seed=seed))
        data["rigid"] = (data["h2"] == [0, 0] and tuple(D.outer_dims) == (0, 0)) if simple else None
        if filt is not None:
            s = subalgebra(filt.gprime, filt.C_prime, "core")
            core = {"dim": list(s.sdim)}
            if s.dim:
                core["h2_restricted"] = dercoh.h2_restricted(s, cross_check=False).dim
            data["core"] = core
            if dercoh.is_reduced(g):
                m, w = dercoh.is_maximal(g, seed)
                data["maximal"] = w.to_json()
            else:
                data["maximal"] = None

    if "rootsys" not in skip and qr.quasireductive:
        rd = rootsys.root_decomposition(g, seed)
        d = rd.to_json()
        d["lattice"] = rootsys.root_lattice_check(rd)
        d["profile_violations"] = [[la.fmt_q(x) for x in a] for a in rootsys.profile_violations(rd)]
        data["rootsys"] = d
        for k in _ROOT_GATES:
            gates[f"rootsys.{k}"] = rd.checks.get(k)

    if "repn" not in skip:
        probes = {"adjoint_simple": simple}
        if qr.quasireductive:
            L = structure.adjoint_loewy(g, seed)
            probes["adjoint_loewy"] = L.to_json()
        if g.realization is not None and not g.realization.projective:
            probes["standard_simple"] = repn.is_simple(repn.standard(g), seed).simple is True
        data["repn"] = probes
    return StructureReport(data, gates)
