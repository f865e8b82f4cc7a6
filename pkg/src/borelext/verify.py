"""One verification procedure per statement: the exponent-lattice predicate
predicts where Ext vanishes, the cocycle oracle computes it, and the two are
compared pair by pair into a machine-readable report.

Statements and their contracts:
  prop1            f = 1 Borel pairs: dim = 1 iff the ratio is a simple root.
  prop2            solvable B' = T N': dims equal eigencharacter multiplicities.
  prop3            f > 1: nonvanishing iff a Frobenius twist of a simple root;
                   the dimension at the hits is reported, not asserted.
  lemma1           character-module isomorphism iff a Frobenius power relates
                   the exponents (surjective first character).
  thm1_necessary   principal series: every nonzero pair carries a (w, i, k)
                   witness.
  thm1_sufficient_w1  pairs satisfying the w = 1 twist condition are nonzero.
  prop4            Ext from a character of G into a principal series: dim = f
                   at w = 1 condition pairs, 0 where no w works; pairs where
                   only some w != 1 works are findings.
  mackey           per-pair ledger over w of B∩B^w contributions summing to
                   the principal-series Ext dimension.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .chars import (
    TorusChar,
    TwistWitness,
    all_chars,
    eigencharacters,
    match_simple_root_twist,
    match_theorem1_condition,
    simple_root,
    trivial_char,
)
from .cohom import ext1_dim, h1_dim
from .field import make_field
from .gmodule import (
    abelian_quotient_with_torus_action,
    char_module,
    char_modules_isomorphic,
    det_char_module,
    fq_hom_module,
    induced_module,
    restrict,
    right_coset_data,
)
from .group import (
    build_borel,
    build_gl,
    build_torus,
    build_unipotent,
    intersect_conjugate,
    unipotent_part,
    weyl_elements,
)

SCHEMA_VERSION = 1


@dataclass
class VerifyConfig:
    mode: str = "auto"  # exhaustive | sampled | auto
    seed: int = 0
    budget_mb: int = 1024
    threads: int = 1

    def h1_kwargs(self) -> dict:
        return {"mode": self.mode, "seed": self.seed, "budget_mb": self.budget_mb,
                "want_basis": False}


@dataclass
class PairRow:
    chi1: tuple[int, ...]
    chi2: tuple[int, ...]
    predicted: bool
    witness: TwistWitness | None
    dim: int
    mode: str
    expected_dim: int | None = None
    asserted: bool = True
    note: str = ""
    w: tuple[int, ...] | None = None  # ledger rows only

    def to_dict(self) -> dict:
        wit = None
        if self.witness is not None:
            wit = {
                "w": list(self.witness.weyl.perm) if self.witness.weyl is not None else None,
                "i": self.witness.root_index,
                "k": self.witness.frob_power,
            }
        out = {
            "chi1": list(self.chi1),
            "chi2": list(self.chi2),
            "predicted": self.predicted,
            "witness": wit,
            "dim": self.dim,
            "mode": self.mode,
            "expected_dim": self.expected_dim,
            "asserted": self.asserted,
        }
        if self.note:
            out["note"] = self.note
        if self.w is not None:
            out["w"] = list(self.w)
        return out


@dataclass
class ExtReport:
    p: int
    f: int
    n: int
    statement: str
    pairs: list[PairRow]
    findings: list[str] = dc_field(default_factory=list)
    extras: dict = dc_field(default_factory=dict)

    @property
    def verdict(self) -> str:
        if not self.check():
            return "fail"
        return "finding" if self.findings else "pass"

    def check(self) -> bool:
        """Recompute the pass/fail half of the verdict from the rows."""
        if self.statement == "mackey":
            total = sum(r.dim for r in self.pairs)
            if total != self.extras.get("g_level_dim"):
                return False
        if self.extras.get("path_mismatches"):
            return False
        for r in self.pairs:
            if not r.asserted:
                continue
            if self.statement == "thm1_necessary":
                if r.dim > 0 and r.witness is None:
                    return False
            elif self.statement == "thm1_sufficient_w1":
                if r.dim == 0:
                    return False
            elif self.statement == "prop3":
                if (r.dim > 0) != r.predicted:
                    return False
            elif self.statement == "mackey":
                continue
            else:
                if r.expected_dim is not None and r.dim != r.expected_dim:
                    return False
                if r.expected_dim is None and (r.dim > 0) != r.predicted:
                    return False
        return True

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "instance": {"p": self.p, "f": self.f, "n": self.n},
            "statement": self.statement,
            "pairs": [r.to_dict() for r in self.pairs],
            "verdict": self.verdict,
            "findings": self.findings,
            "extras": self.extras,
        }


CSV_FIELDS = [
    "schema", "p", "f", "n", "statement", "chi1", "chi2", "predicted",
    "witness_w", "witness_i", "witness_k", "dim", "expected_dim", "asserted",
    "mode", "row_w", "note", "verdict",
]


def csv_rows(reports) -> list[dict]:
    out = []
    for rep in reports:
        verdict = rep.verdict
        for r in rep.pairs:
            wit = r.witness
            out.append({
                "schema": SCHEMA_VERSION,
                "p": rep.p, "f": rep.f, "n": rep.n,
                "statement": rep.statement,
                "chi1": ";".join(map(str, r.chi1)),
                "chi2": ";".join(map(str, r.chi2)),
                "predicted": int(r.predicted),
                "witness_w": ";".join(map(str, wit.weyl.perm)) if wit and wit.weyl else "",
                "witness_i": wit.root_index if wit else "",
                "witness_k": wit.frob_power if wit else "",
                "dim": r.dim,
                "expected_dim": "" if r.expected_dim is None else r.expected_dim,
                "asserted": int(r.asserted),
                "mode": r.mode,
                "row_w": ";".join(map(str, r.w)) if r.w else "",
                "note": r.note,
                "verdict": verdict,
            })
    return out


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in csv_rows(reports):
        writer.writerow(row)
    return buf.getvalue()


def reports_to_json(reports, single_ok: bool = True) -> str:
    payload = [r.to_json_dict() for r in reports]
    obj = payload[0] if single_ok and len(payload) == 1 else payload
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _pmap(fn, items, threads: int):
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


class Instance:
    """Groups, characters and module caches for one (p, f, n)."""

    def __init__(self, p: int, f: int, n: int):
        self.p, self.f, self.n = p, f, n
        self.field = make_field(p, f)
        self.qm1 = self.field.q - 1
        self._ind: dict[tuple, object] = {}
        self._res: dict[tuple, object] = {}
        self._bw: dict[tuple, object] = {}
        self._np: dict[tuple, object] = {}
        self._eig: dict[tuple, list] = {}
        self._shap: dict[tuple, tuple[int, str]] = {}

    @cached_property
    def G(self):
        return build_gl(self.field, self.n)

    @cached_property
    def B(self):
        return build_borel(self.field, self.n)

    @cached_property
    def T(self):
        return build_torus(self.field, self.n)

    @cached_property
    def N(self):
        return build_unipotent(self.field, self.n)

    @cached_property
    def weyls(self):
        return weyl_elements(self.field, self.n)

    @cached_property
    def chars(self):
        return all_chars(self.n, self.qm1)

    @cached_property
    def coset_data(self):
        return right_coset_data(self.G, self.B)

    def char(self, exps) -> TorusChar:
        return TorusChar(tuple(exps), self.qm1)

    def induced(self, chi: TorusChar):
        got = self._ind.get(chi.exps)
        if got is None:
            got = induced_module(self.G, self.B, chi, coset_data=self.coset_data)
            self._ind[chi.exps] = got
        return got

    def res_induced(self, chi: TorusChar):
        got = self._res.get(chi.exps)
        if got is None:
            got = restrict(self.induced(chi), self.B)
            self._res[chi.exps] = got
        return got

    def bw(self, w):
        got = self._bw.get(w.perm)
        if got is None:
            got = intersect_conjugate(self.B, w)
            self._bw[w.perm] = got
        return got

    def nprime(self, w):
        got = self._np.get(w.perm)
        if got is None:
            got = unipotent_part(self.bw(w))
            self._np[w.perm] = got
        return got

    def weyl_eigen(self, w):
        """Eigencharacters of N'/[N',N'] for B∩B^w, cached per w."""
        got = self._eig.get(w.perm)
        if got is None:
            Q = abelian_quotient_with_torus_action(self.nprime(w), self.T)
            got = eigencharacters(Q, self.field)
            self._eig[w.perm] = got
        return got

    def ext_b(self, chi1: TorusChar, chi2: TorusChar, cfg: VerifyConfig):
        """Ext between two Borel characters, F_q-linearly."""
        M = fq_hom_module(char_module(self.B, chi1), char_module(self.B, chi2))
        return h1_dim(self.B, M, **cfg.h1_kwargs())

    def shapiro_dim(self, chi1: TorusChar, chi2: TorusChar, cfg: VerifyConfig):
        key = (chi1.exps, chi2.exps, cfg.mode, cfg.seed)
        got = self._shap.get(key)
        if got is None:
            M = fq_hom_module(char_module(self.B, chi1), self.res_induced(chi2))
            r = h1_dim(self.B, M, **cfg.h1_kwargs())
            got = (r.dim_h1, r.mode)
            self._shap[key] = got
        return got


_INSTANCES: dict[tuple[int, int, int], Instance] = {}


def get_instance(p: int, f: int, n: int) -> Instance:
    key = (p, f, n)
    if key not in _INSTANCES:
        _INSTANCES[key] = Instance(p, f, n)
    return _INSTANCES[key]


def verify_prop1(inst: Instance, cfg: VerifyConfig | None = None) -> ExtReport:
    """f = 1 criterion over all Borel character pairs."""
    cfg = cfg or VerifyConfig()
    if inst.f != 1:
        raise ValueError("this criterion is stated over the prime field; use prop3 for f > 1")

    def row(pair):
        chi1, chi2 = pair
        wit = match_simple_root_twist(chi1.inverse() * chi2)
        r = inst.ext_b(chi1, chi2, cfg)
        return PairRow(chi1.exps, chi2.exps, wit is not None, wit, r.dim_h1, r.mode,
                       expected_dim=1 if wit is not None else 0)

    pairs = [(c1, c2) for c1 in inst.chars for c2 in inst.chars]
    rows = _pmap(row, pairs, cfg.threads)
    return ExtReport(inst.p, inst.f, inst.n, "prop1", rows)


def verify_prop2(inst: Instance, cfg: VerifyConfig | None = None, weyl=None) -> list[ExtReport]:
    """Eigencharacter multiplicities of N'/[N',N'] against Ext over B∩B^w."""
    cfg = cfg or VerifyConfig()
    if inst.f != 1:
        raise ValueError("the multiplicity criterion is verified over the prime field")
    ws = [weyl] if weyl is not None else inst.weyls
    reports = []
    for w in ws:
        bw = inst.bw(w)
        npart = inst.nprime(w)
        Q = abelian_quotient_with_torus_action(npart, inst.T)
        eig = eigencharacters(Q, inst.field)
        mult = {beta.exps: m for beta, m in eig}
        rows = []
        triv = trivial_char(inst.n, inst.qm1)
        for chi in inst.chars:
            M = char_module(bw, chi)
            r = h1_dim(bw, M, **cfg.h1_kwargs())
            expected = mult.get(chi.exps, 0)
            rows.append(PairRow(triv.exps, chi.exps, expected > 0, None, r.dim_h1, r.mode,
                                expected_dim=expected))
        extras = {
            "w": list(w.perm),
            "eigencharacters": [[list(b.exps), m] for b, m in eig],
            "nprime_order": npart.order,
        }
        reports.append(ExtReport(inst.p, inst.f, inst.n, "prop2", rows, extras=extras))
    return reports


def verify_prop3(inst: Instance, cfg: VerifyConfig | None = None) -> ExtReport:
    """f > 1 criterion: nonvanishing exactly at Frobenius twists of simple
    roots; measured dimensions at the hits are findings."""
    cfg = cfg or VerifyConfig()
    if inst.f == 1:
        raise ValueError("use prop1 over the prime field")
    triv = trivial_char(inst.n, inst.qm1)

    def row(chi):
        wit = match_simple_root_twist(chi)
        r = h1_dim(inst.B, char_module(inst.B, chi), **cfg.h1_kwargs())
        return PairRow(triv.exps, chi.exps, wit is not None, wit, r.dim_h1, r.mode)

    rows = _pmap(row, inst.chars, cfg.threads)
    findings = [
        f"dim at chi={r.chi2} is {r.dim} (measured, not asserted)"
        for r in rows if r.dim > 0
    ]
    return ExtReport(inst.p, inst.f, inst.n, "prop3", rows, findings=findings)


def verify_lemma1(p: int, f: int, cfg: VerifyConfig | None = None) -> ExtReport:
    """Character-module isomorphism over the multiplicative group F_q^*."""
    cfg = cfg or VerifyConfig()
    fld = make_field(p, f)
    qm1 = fld.q - 1
    A = build_torus(fld, 1)
    rows = []
    import math

    for e1 in range(qm1):
        if math.gcd(e1, qm1) != 1:
            continue  # the statement assumes the first character is surjective
        chi1 = TorusChar((e1,), qm1)
        for e2 in range(qm1):
            chi2 = TorusChar((e2,), qm1)
            predicted = any(e1 == (e2 * pow(p, k, qm1)) % qm1 for k in range(f))
            iso, _mu = char_modules_isomorphic(A, chi1, chi2)
            rows.append(PairRow(chi1.exps, chi2.exps, predicted, None, int(iso), "exhaustive",
                                expected_dim=int(predicted)))
    return ExtReport(p, f, 1, "lemma1", rows)


THM1_PATHS = {
    (3, 1, 2): ("direct", "shapiro"),
    (5, 1, 2): ("direct", "shapiro"),
    (3, 2, 2): ("shapiro",),
    (3, 1, 3): ("shapiro",),
}


def thm1_paths(inst: Instance) -> tuple[str, ...]:
    return THM1_PATHS.get((inst.p, inst.f, inst.n), ("shapiro",))


def verify_thm1(inst: Instance, cfg: VerifyConfig | None = None) -> list[ExtReport]:
    """Principal-series Ext: necessity of the twist condition, sufficiency
    of its w = 1 form, and agreement of the two oracle paths."""
    cfg = cfg or VerifyConfig()
    paths = thm1_paths(inst)
    mismatches = []

    def compute(pair):
        chi1, chi2 = pair
        dim, mode = inst.shapiro_dim(chi1, chi2, cfg)
        if "direct" in paths:
            rd = ext1_dim(inst.G, inst.induced(chi1), inst.induced(chi2), **cfg.h1_kwargs())
            if rd.dim_h1 != dim:
                mismatches.append({"chi1": list(chi1.exps), "chi2": list(chi2.exps),
                                   "shapiro": dim, "direct": rd.dim_h1})
        return chi1, chi2, dim, mode

    pairs = [(c1, c2) for c1 in inst.chars for c2 in inst.chars]
    computed = _pmap(compute, pairs, cfg.threads)
    mismatches.sort(key=lambda m: (m["chi1"], m["chi2"]))

    rows_nec, rows_suf, findings = [], [], []
    for chi1, chi2, dim, mode in computed:
        wit = match_theorem1_condition(chi1, chi2, inst.weyls)
        w1 = match_simple_root_twist(chi1.inverse() * chi2)
        rows_nec.append(PairRow(chi1.exps, chi2.exps, wit is not None, wit, dim, mode))
        if w1 is not None:
            rows_suf.append(PairRow(chi1.exps, chi2.exps, True, w1, dim, mode))
        elif wit is not None:
            findings.append(
                f"pair {chi1.exps}->{chi2.exps}: condition holds only at w={wit.weyl.perm}, "
                f"computed dim = {dim}"
            )
    extras = {"paths": list(paths), "path_mismatches": mismatches}
    nec = ExtReport(inst.p, inst.f, inst.n, "thm1_necessary", rows_nec, findings=findings,
                    extras=extras)
    suf = ExtReport(inst.p, inst.f, inst.n, "thm1_sufficient_w1", rows_suf,
                    extras={"paths": list(paths)})
    return [nec, suf]


def verify_prop4(inst: Instance, cfg: VerifyConfig | None = None) -> ExtReport:
    """Ext from a character of the full group into a principal series."""
    cfg = cfg or VerifyConfig()
    f = inst.f

    def row(pair):
        a, chi2 = pair
        chi1_t = TorusChar((a,) * inst.n, inst.qm1)  # det^a restricted to T
        M = fq_hom_module(det_char_module(inst.G, a), inst.induced(chi2))
        r = h1_dim(inst.G, M, **cfg.h1_kwargs())
        w1 = match_simple_root_twist(chi1_t.inverse() * chi2)
        anyw = match_theorem1_condition(chi1_t, chi2, inst.weyls)
        if w1 is not None:
            return PairRow(chi1_t.exps, chi2.exps, True, w1, r.dim_h1, r.mode, expected_dim=f)
        if anyw is None:
            return PairRow(chi1_t.exps, chi2.exps, False, None, r.dim_h1, r.mode, expected_dim=0)
        return PairRow(chi1_t.exps, chi2.exps, True, anyw, r.dim_h1, r.mode,
                       expected_dim=None, asserted=False,
                       note="condition holds only at w != 1; dim reported, not asserted")

    pairs = [(a, chi2) for a in range(inst.qm1) for chi2 in inst.chars]
    rows = _pmap(row, pairs, cfg.threads)
    findings = [
        f"pair {r.chi1}->{r.chi2}: w != 1 condition only, computed dim = {r.dim}"
        for r in rows if not r.asserted
    ]
    return ExtReport(inst.p, inst.f, inst.n, "prop4", rows, findings=findings)


def mackey_ledger(inst: Instance, chi1: TorusChar, chi2: TorusChar,
                  cfg: VerifyConfig | None = None, g_level: tuple[int, str] | None = None) -> ExtReport:
    """Per-w contributions Ext_{B∩B^w}(chi1, chi2^w) against the
    principal-series Ext dimension, with the eigencharacters of each
    N'/[N',N'] itemized."""
    cfg = cfg or VerifyConfig()
    from .chars import weyl_twist

    if g_level is None:
        g_level = inst.shapiro_dim(chi1, chi2, cfg)
    g_dim, g_mode = g_level
    rows = []
    for w in inst.weyls:
        bw = inst.bw(w)
        eig = inst.weyl_eigen(w)
        chi2w = weyl_twist(chi2, w)
        M = fq_hom_module(char_module(bw, chi1), char_module(bw, chi2w))
        r = h1_dim(bw, M, **cfg.h1_kwargs())
        note = "eigenchars: " + ",".join(f"{list(b.exps)}x{m}" for b, m in eig)
        rows.append(PairRow(chi1.exps, chi2.exps, r.dim_h1 > 0, None, r.dim_h1, r.mode,
                            note=note, w=w.perm))
    extras = {"g_level_dim": g_dim, "g_level_mode": g_mode}
    return ExtReport(inst.p, inst.f, inst.n, "mackey", rows, extras=extras)


def mackey_all(inst: Instance, cfg: VerifyConfig | None = None) -> list[ExtReport]:
    cfg = cfg or VerifyConfig()

    def one(pair):
        chi1, chi2 = pair
        return mackey_ledger(inst, chi1, chi2, cfg)

    pairs = [(c1, c2) for c1 in inst.chars for c2 in inst.chars]
    return _pmap(one, pairs, cfg.threads)


REGISTRY: list[tuple[str, tuple]] = [
    ("prop1", (3, 1, 2)),
    ("prop1", (5, 1, 2)),
    ("prop1", (3, 1, 3)),
    ("prop2", (3, 1, 3)),
    ("prop3", (3, 2, 2)),
    ("lemma1", (3, 2)),
    ("lemma1", (5, 2)),
    ("thm1", (3, 1, 2)),
    ("thm1", (5, 1, 2)),
    ("thm1", (3, 2, 2)),
    ("thm1", (3, 1, 3)),
    ("prop4", (3, 1, 2)),
    ("prop4", (3, 2, 2)),
    ("mackey", (3, 1, 2)),
    ("mackey", (5, 1, 2)),
    ("mackey", (3, 2, 2)),
    ("mackey", (3, 1, 3)),
]


def run_statement(statement: str, args: tuple, cfg: VerifyConfig) -> list[ExtReport]:
    if statement == "prop1":
        return [verify_prop1(get_instance(*args), cfg)]
    if statement == "prop2":
        return verify_prop2(get_instance(*args), cfg)
    if statement == "prop3":
        return [verify_prop3(get_instance(*args), cfg)]
    if statement == "lemma1":
        return [verify_lemma1(args[0], args[1], cfg)]
    if statement == "thm1":
        return verify_thm1(get_instance(*args), cfg)
    if statement == "prop4":
        return [verify_prop4(get_instance(*args), cfg)]
    if statement == "mackey":
        return mackey_all(get_instance(*args), cfg)
    raise ValueError(f"unknown statement {statement!r}")


def run_all(cfg: VerifyConfig) -> list[ExtReport]:
    out = []
    for statement, args in REGISTRY:
        out.extend(run_statement(statement, args, cfg))
    return out
