"""Shared helpers for the test suite: random inputs and an independent
dense-elimination rank oracle."""

from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from gaugelab import GradedPoly, trivial_model


def two_field_model(n=2):
    """An even scalar and an odd scalar; the workhorse for random tests."""
    return trivial_model([("s", 0), ("psi", 1)], n=n)


def jet_pool(table, names, max_order, n=None):
    n = table.n if n is None else n
    pool = []
    for nm in names:
        decl = table.decl(nm)
        for comps in table.component_tuples(decl):
            for k in range(max_order + 1):
                for mi in combinations_with_replacement(range(n), k):
                    pool.append(table.symbol(decl, comps, mi))
    return pool


def random_poly(rng, pool, max_terms=4, max_degree=3, parity=None,
                coeff_range=(-3, 3)):
    """Random canonical polynomial over the pool, optionally parity-pure."""
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        for _attempt in range(50):
            fs = tuple(rng.choice(pool) for _ in range(rng.randint(0, max_degree)))
            par = 0
            for f in fs:
                par ^= f.parity
            if parity is None or par == parity:
                break
        else:
            continue
        num = rng.randint(*coeff_range)
        den = rng.randint(1, 3)
        terms.append((Fraction(num, den), fs))
    return GradedPoly.from_raw(terms)


def dense_rank_oracle(rows):
    """Plain Gaussian elimination over Fraction; independent of the
    fraction-free implementation in the package."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = None
        for r in range(rank, len(m)):
            if m[r][c] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = Fraction(1) / m[rank][c]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def boundary_rows(bm):
    """Dense row-major copy (targets x sources) of a BoundaryMatrix."""
    rows = [[Fraction(0)] * len(bm.source) for _ in bm.target]
    for j, col in enumerate(bm.columns):
        for i, c in col.items():
            rows[i][j] = c
    return rows


def increasing_tuples(n, k):
    return list(combinations(range(n), k))


def rebuild_with_mutation(m, stage, fam_name, comps, fn):
    """Rebuild a model with fn applied to one generator member."""
    from gaugelab import FIELD, ModelBuilder

    b = ModelBuilder(m.name + "+mut", m.n)
    for decl in m.table.kind_decls(FIELD):
        b.add_field(decl.name, parity=decl.parity, arity=decl.arity,
                    antisym=decl.antisym)
    b.set_lagrangian(m.lagrangian)
    for k in range(m.max_stage + 1):
        fams = []
        for fam in m.families_at(k):
            members = dict(fam.members)
            if k == stage and fam.name == fam_name:
                members[tuple(comps)] = fn(members[tuple(comps)])
            fams.append((fam.name, fam.arity, fam.antisym, members))
        b.add_stage(fams)
    return b.build()


def flip_first_term(poly):
    fs, c = poly.terms[0]
    from gaugelab import GradedPoly
    return poly - GradedPoly(((fs, 2 * c),))


def drop_first_term(poly):
    fs, c = poly.terms[0]
    from gaugelab import GradedPoly
    return poly - GradedPoly(((fs, c),))
