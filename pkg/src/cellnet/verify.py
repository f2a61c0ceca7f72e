"""Self-check suite for a network: the structural identities every
semigroup network must satisfy, checked exactly on random data."""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .colored import (ColoredNetworkSpec, ColoredPolyFamily, colored_a_map, colored_bracket,
                      colored_compose, colored_gamma_symbolic, colored_pi)
from .finmap import compose_maps
from .liealg import kernel_gamma_space, sigma_bracket, sigma_compose
from .network import NetworkSpec, a_map, fundamental_network, gamma_eval, gamma_symbolic, pi
from .polyspace import PolyMap, random_polymap
from .structure import MAX_PARTITION_CELLS, balanced_partitions, network_symmetries


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    informational: bool = False


@dataclass
class VerifyReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def add(self, name, passed, detail="", informational=False):
        self.checks.append(Check(name, bool(passed), detail, informational))


def stack(parts: list[PolyMap]) -> PolyMap:
    """Concatenate the outputs of maps on one variable layout."""
    comps = [c for f in parts for c in f.components]
    return PolyMap(comps, m=len(comps), p=parts[0].p, blocks=parts[0].blocks)


def split_field(F: PolyMap) -> list[PolyMap]:
    """Cut a vector field on the cell blocks into one map per cell."""
    out, pos = [], 0
    for b in F.blocks:
        out.append(PolyMap(F.components[pos:pos + b], m=b, p=F.p, blocks=F.blocks))
        pos += b
    return out


def field_compose(F: PolyMap, G: PolyMap) -> PolyMap:
    return F.substitute_blocks(split_field(G))


def field_bracket(F: PolyMap, G: PolyMap) -> PolyMap:
    """DF·G − DG·F for polynomial vector fields on the same cell blocks."""
    Fs, Gs = split_field(F), split_field(G)
    acc = F.zero_like()
    for slot in range(1, len(F.blocks) + 1):
        acc = acc + F.directional(slot, Gs[slot - 1]) - G.directional(slot, Fs[slot - 1])
    return acc


def _closure_checks(spec: NetworkSpec, rep: VerifyReport):
    table = spec.require_semigroup()
    n = spec.n
    ok = all(compose_maps(spec.maps[a], spec.maps[b]) == spec.maps[table.table[a][b] - 1]
             for a in range(n) for b in range(n))
    rep.add("composition table matches composition", ok)
    ok = all(table.tilde[a] @ table.tilde[b] == table.tilde[table.table[a][b] - 1]
             for a in range(n) for b in range(n))
    rep.add("left multiplication is a representation", ok)
    ok = all((a_map(spec, a) @ a_map(spec, b)).selector == a_map(spec, table.table[a - 1][b - 1]).selector
             for a in range(1, n + 1) for b in range(1, n + 1))
    rep.add("A-maps represent the semigroup", ok)
    ok = all((a_map(spec, j) @ pi(spec, i)).selector == pi(spec, spec.maps[j - 1](i)).selector
             for j in range(1, n + 1) for i in range(1, spec.N + 1))
    rep.add("A-maps intertwine the input selections", ok)


def _random_point(rng, size):
    return [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(size)]


def verify_network(raw: NetworkSpec, samples: int = 5, seed: int = 0, max_degree: int = 2) -> VerifyReport:
    """Run every check on the closure of ``raw``."""
    rng = random.Random(seed)
    spec = raw if raw.is_semigroup else raw.closure()
    rep = VerifyReport()
    _closure_checks(spec, rep)
    n, m = spec.n, spec.m

    def rnd():
        return random_polymap(rng, n, m, 0, max_degree, min_degree=1)

    comp_ok = br_ok = jac_ok = anti_ok = True
    for _ in range(samples):
        f, g, h = rnd(), rnd(), rnd()
        Gf, Gg = stack(gamma_symbolic(spec, f)), stack(gamma_symbolic(spec, g))
        comp_ok &= stack(gamma_symbolic(spec, sigma_compose(spec, f, g))) == field_compose(Gf, Gg)
        fg = sigma_bracket(spec, f, g)
        br_ok &= stack(gamma_symbolic(spec, fg)) == field_bracket(Gf, Gg)
        anti_ok &= not (fg + sigma_bracket(spec, g, f))
        jac = (sigma_bracket(spec, f, sigma_bracket(spec, g, h))
               + sigma_bracket(spec, g, sigma_bracket(spec, h, f))
               + sigma_bracket(spec, h, fg))
        jac_ok &= not jac
    rep.add("composition homomorphism", comp_ok)
    rep.add("bracket homomorphism", br_ok)
    rep.add("antisymmetry", anti_ok)
    rep.add("Jacobi identity", jac_ok)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fund = fundamental_network(spec)
    conj_ok = True
    for _ in range(samples):
        f = rnd()
        x = _random_point(rng, spec.N * m)
        gx = gamma_eval(spec, f, x)
        for i in range(1, spec.N + 1):
            lhs = gamma_eval(fund, f, pi(spec, i).apply_flat(x, m))
            rhs = pi(spec, i).apply_flat(gx, m)
            conj_ok &= lhs == rhs
    rep.add("fundamental network conjugacy", conj_ok)

    if spec.N <= MAX_PARTITION_CELLS:
        same = (network_symmetries(raw) == network_symmetries(spec)
                and balanced_partitions(raw) == balanced_partitions(spec))
        rep.add("closure keeps symmetries and balanced partitions", same)
    else:
        rep.add("closure keeps symmetries and balanced partitions", True,
                f"skipped: more than {MAX_PARTITION_CELLS} cells", informational=True)

    dim = len(kernel_gamma_space(spec, 0, 0, 0))
    rep.add("linear maps act injectively", dim == 0,
            f"kernel on linear maps has dimension {dim}", informational=True)
    return rep


def verify_colored(raw: ColoredNetworkSpec, samples: int = 5, seed: int = 0, max_degree: int = 2) -> VerifyReport:
    rng = random.Random(seed)
    spec = raw if raw.is_semigroupoid else ColoredNetworkSpec.build(
        raw.cell_counts, raw.cell_dims, {(d, c): [s.images for s in raw.typed(d, c)]
                                         for d in range(1, raw.C + 1) for c in range(1, raw.C + 1)})
    rep = VerifyReport()
    C = spec.C
    ok = True
    for e in range(1, C + 1):
        for d in range(1, C + 1):
            for c in range(1, C + 1):
                for j1 in range(1, spec.n(e, d) + 1):
                    for j2 in range(1, spec.n(d, c) + 1):
                        j3 = spec.product(e, d, c, j1, j2)
                        lhs = colored_a_map(spec, e, d, j1)
                        rhs = colored_a_map(spec, d, c, j2)
                        ok &= (lhs @ rhs).selector == colored_a_map(spec, e, c, j3).selector
    rep.add("A-maps represent the semigroupoid", ok)
    ok = all((colored_a_map(spec, d, c, j) @ colored_pi(spec, c, i)).selector
             == colored_pi(spec, d, spec.typed(d, c)[j - 1](i)).selector
             for d in range(1, C + 1) for c in range(1, C + 1)
             for j in range(1, spec.n(d, c) + 1) for i in range(1, spec.N(c) + 1))
    rep.add("A-maps intertwine the input selections", ok)

    def rnd():
        return ColoredPolyFamily([random_polymap(rng, m=spec.dim(c), blocks=spec.blocks(c),
                                                 max_degree=max_degree) for c in range(1, C + 1)])

    comp_ok = br_ok = jac_ok = True
    for _ in range(samples):
        f, g, h = rnd(), rnd(), rnd()
        Gf, Gg = stack(colored_gamma_symbolic(spec, f)), stack(colored_gamma_symbolic(spec, g))
        comp_ok &= stack(colored_gamma_symbolic(spec, colored_compose(spec, f, g))) == field_compose(Gf, Gg)
        fg = colored_bracket(spec, f, g)
        br_ok &= stack(colored_gamma_symbolic(spec, fg)) == field_bracket(Gf, Gg)
        jac = (colored_bracket(spec, f, colored_bracket(spec, g, h))
               + colored_bracket(spec, g, colored_bracket(spec, h, f))
               + colored_bracket(spec, h, fg))
        jac_ok &= not jac
    rep.add("composition homomorphism", comp_ok)
    rep.add("bracket homomorphism", br_ok)
    rep.add("Jacobi identity", jac_ok)
    return rep
