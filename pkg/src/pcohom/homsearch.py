"""Homomorphism enumeration, the T^U intersection subgroups, and lifting
through central extensions.

The search runs over generator images in BFS-word order, level by level:
a partial assignment of images to the first j generators forces the image
of every element whose BFS word uses only those generators, and the
assignment is pruned as soon as any forced product contradicts the
multiplication table.  All checks are vectorized over blocks of candidate
prefixes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (FiniteGroup, GroupHom, Subgroup, element_order,
                   intersect_subgroups, quotient_group)
from .errors import BudgetExceeded
from .unitriangular import CentralExtension, OmegaFamily

DEFAULT_BUDGET = 2 ** 31
_CHUNK = 8192


@dataclass
class HomSet:
    domain: FiniteGroup
    codomain: FiniteGroup
    homs: list
    explored_prefixes: int = 0

    def __len__(self):
        return len(self.homs)

    def image_matrix(self):
        return np.stack([h.image for h in self.homs])


def _partial_bfs(G: FiniteGroup, j: int):
    """BFS over G restricted to the first j generators.

    Returns (elems, pred) where elems lists reached element ids in BFS order
    and pred[t] = (position of predecessor in elems, generator index)."""
    key = ("pbfs", j)
    if key not in G._cache:
        pos = {0: 0}
        elems = [0]
        pred = [(-1, -1)]
        i = 0
        while i < len(elems):
            for gi in range(j):
                y = int(G.mult_gen[elems[i], gi])
                if y not in pos:
                    pos[y] = len(elems)
                    elems.append(y)
                    pred.append((i, gi))
            i += 1
        G._cache[key] = (np.asarray(elems, dtype=np.int32),
                         np.asarray(pred, dtype=np.int32), pos)
    return G._cache[key]


def _filter_prefixes(G: FiniteGroup, U: FiniteGroup, P: np.ndarray, j: int):
    """Keep the prefixes (rows of P, shape m x j) that define a consistent
    partial homomorphism on the subgroup generated by the first j generators.
    Returns (surviving P, their image matrices over that subgroup)."""
    elems, pred, pos = _partial_bfs(G, j)
    L = len(elems)
    # position of e*gen_s within elems, for each reached element and s < j
    tgt = np.asarray([[pos[int(G.mult_gen[e, s])] for s in range(j)]
                      for e in elems], dtype=np.int32)
    keep_P = []
    keep_img = []
    for lo in range(0, P.shape[0], _CHUNK):
        C = P[lo:lo + _CHUNK]
        m = C.shape[0]
        img = np.zeros((m, L), dtype=np.int32)
        for t in range(1, L):
            pe, pg = pred[t]
            img[:, t] = U.mult[img[:, pe], C[:, pg]]
        # forced-product consistency: img[e]*C[s] == img[e*s] for all e, s<j
        lhs = U.mult[img[:, :, None], C[:, None, :]]
        ok = (lhs == img[:, tgt]).all(axis=(1, 2))
        keep_P.append(C[ok])
        keep_img.append(img[ok])
    return np.concatenate(keep_P), np.concatenate(keep_img)


def enumerate_homs(G: FiniteGroup, U: FiniteGroup,
                   budget=DEFAULT_BUDGET) -> HomSet:
    """All homomorphisms G -> U, in deterministic candidate order."""
    key = ("homs", U.key)
    if key in G._cache:
        return G._cache[key]

    ngens = len(G.generators)
    if ngens == 0:
        hs = HomSet(G, U, [GroupHom(G, U, np.zeros(G.order, dtype=np.int32),
                                    verified=True)])
        G._cache[key] = hs
        return hs

    # candidate images per generator: the image order must divide the
    # generator's order
    cands = []
    for s in G.generators:
        o = element_order(G, s)
        c = np.asarray([u for u in range(U.order)
                        if o % element_order(U, u) == 0], dtype=np.int32)
        cands.append(c)

    explored = 0
    P = np.zeros((1, 0), dtype=np.int32)
    img = None
    for j in range(1, ngens + 1):
        c = cands[j - 1]
        explored += P.shape[0] * len(c)
        if explored > budget:
            raise BudgetExceeded(f"hom search budget exceeded ({explored})",
                                 explored=explored)
        P = np.concatenate([np.repeat(P, len(c), axis=0),
                            np.tile(c, P.shape[0]).reshape(-1, 1)], axis=1)
        P, img = _filter_prefixes(G, U, P, j)

    # img columns follow the full-BFS element order == element ids
    elems, _, _ = _partial_bfs(G, ngens)
    assert len(elems) == G.order
    images = np.zeros((P.shape[0], G.order), dtype=np.int32)
    images[:, elems] = img
    # final safety net: full |G|^2 multiplicativity check per candidate
    homs = []
    for row in images:
        h = GroupHom(G, U, row, verified=False)
        homs.append(h)
    hs = HomSet(G, U, homs, explored_prefixes=explored)
    G._cache[key] = hs
    return hs


def t_subgroup(G: FiniteGroup, U: FiniteGroup, budget=DEFAULT_BUDGET) -> Subgroup:
    """T^U(G): the intersection of the kernels of all homomorphisms G -> U."""
    key = ("tsub", U.key)
    if key not in G._cache:
        hs = enumerate_homs(G, U, budget=budget)
        mask = (hs.image_matrix() == 0).all(axis=0)
        G._cache[key] = Subgroup(G, np.nonzero(mask)[0].astype(np.int32),
                                 check=False)
    return G._cache[key]


@dataclass
class TBundle:
    family: OmegaFamily
    T: Subgroup
    Tbar: Subgroup
    kernels_U: list = field(default_factory=list)     # T^{U_w}(G) per extension
    kernels_Ubar: list = field(default_factory=list)  # T^{Ubar_w}(G) per extension


def t_bundle(G: FiniteGroup, fam: OmegaFamily, budget=DEFAULT_BUDGET) -> TBundle:
    key = ("tbundle", fam.label)
    if key in G._cache:
        return G._cache[key]
    ku = [t_subgroup(G, ext.E, budget=budget) for ext in fam.extensions]
    kb = [t_subgroup(G, ext.Gbar, budget=budget) for ext in fam.extensions]
    T = intersect_subgroups(ku)
    Tbar = intersect_subgroups(kb)
    assert T <= Tbar, "T(G) <= Tbar(G) must hold (gamma-hom mechanism)"
    assert T.is_normal() and Tbar.is_normal()
    bundle = TBundle(fam, T, Tbar, ku, kb)
    G._cache[key] = bundle
    return bundle


def _complete_candidates(G: FiniteGroup, U: FiniteGroup, C: np.ndarray):
    """Evaluate candidate generator-image rows of C into full image arrays
    and keep the multiplicative ones.  Returns (kept C, image matrix)."""
    ngens = len(G.generators)
    keep_C, keep_img = [], []
    for lo in range(0, C.shape[0], _CHUNK):
        B = C[lo:lo + _CHUNK]
        m = B.shape[0]
        img = np.zeros((m, G.order), dtype=np.int32)
        for x in range(1, G.order):
            pe, pg = G.pred[x]
            img[:, x] = U.mult[img[:, pe], B[:, pg]]
        lhs = U.mult[img[:, :, None], B[:, None, :]]
        ok = (lhs == img[:, G.mult_gen]).all(axis=(1, 2))
        keep_C.append(B[ok])
        keep_img.append(img[ok])
    return np.concatenate(keep_C), np.concatenate(keep_img)


def lift_hom(ext: CentralExtension, pi: GroupHom, rhobar: GroupHom,
             budget=DEFAULT_BUDGET):
    """A homomorphism rho: G -> E with lambda o rho = rhobar o pi, or None.

    Searches the |Z| preimage choices per generator of G."""
    assert pi.is_surjective()
    G = pi.domain
    required = rhobar.image[pi.image]
    ngens = len(G.generators)
    if ngens == 0:
        return GroupHom(G, ext.E, np.zeros(G.order, dtype=np.int32),
                        verified=True)
    pre = []
    for s in G.generators:
        b = int(required[s])
        pre.append(np.nonzero(ext.lam.image == b)[0].astype(np.int32))
    total = 1
    for c in pre:
        total *= len(c)
    if total > budget:
        raise BudgetExceeded(f"lift search budget exceeded ({total})",
                             explored=0)
    # cartesian product, deterministic order
    C = pre[0].reshape(-1, 1)
    for c in pre[1:]:
        C = np.concatenate([np.repeat(C, len(c), axis=0),
                            np.tile(c, C.shape[0]).reshape(-1, 1)], axis=1)
    kept, imgs = _complete_candidates(G, ext.E, C)
    if kept.shape[0] == 0:
        return None
    rho = GroupHom(G, ext.E, imgs[0], verified=False)
    assert np.array_equal(ext.lam.image[rho.image], required)
    return rho


def liftability_crosscheck(ext: CentralExtension, pi: GroupHom,
                           rhobar: GroupHom, budget=DEFAULT_BUDGET) -> dict:
    """Decide liftability of rhobar three ways and assert agreement:

    (a) direct lift search;
    (c) the inflation of the pulled-back classifying class vanishes;
    (d) the pulled-back class has a transgression preimage in H^1(N)^G.
    """
    from . import cohomology as coh

    G, Q = pi.domain, pi.codomain
    p = ext.p
    lift = lift_hom(ext, pi, rhobar, budget=budget)
    a = lift is not None

    alpha = coh.classifying_cocycle(ext)
    pulled = coh.pullback(alpha, rhobar)
    inflated = pulled.values[np.ix_(pi.image, pi.image)]
    c = coh.is_coboundary(G, inflated, p)

    # (d): pulled class = trg(psi) for an invariant psi on N = ker(pi)
    N = pi.kernel()
    psis = coh.conj_invariant_h1(G, N, p)
    h2 = coh.h2_space(Q, p)
    target = h2.coords(pulled)
    if psis:
        trg_mat = np.stack([h2.coords(coh.transgression(pi, ps)) for ps in psis])
        from . import gf
        sol = gf.solve(trg_mat.T, target, p) if h2.dim else np.zeros(len(psis),
                                                                     dtype=np.int64)
        d = sol is not None
        psi_coeffs = None if sol is None else [int(x) for x in sol]
    else:
        d = not target.any() if h2.dim else True
        psi_coeffs = [] if d else None

    status = "PASS" if (a == c == d) else "FAIL"
    return {
        "lift_exists": a,
        "inflation_vanishes": c,
        "transgression_preimage_exists": d,
        "psi_coefficients": psi_coeffs,
        "status": status,
    }
