"""Unitriangular groups and the central extensions built from them.

Provides U_n(Z/m), the bar extensions 0 -> Z/p -> U_n(Z/p^e) -> Ubar -> 1
whose kernel is the order-p subgroup of the corner copy of the coefficient
ring, the order-p^3 exponent-p^2 group M_{p^3}, and the three extension
families (zassenhaus / lower-central / mixed) together with verified
witnesses for the two standing assumptions on a family:

  (I)  each quotient group Ubar carries homomorphisms (the "gammas") into
       concrete groups with trivially intersecting kernels;
  (II) the kernel Z/p embeds into Ubar.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (FiniteGroup, GroupHom, Subgroup, element_index,
                   generate_group, intersect_subgroups, quotient_group,
                   subgroup_generated)
from .elements import MatMod, Perm, Residue

_UT_CACHE: dict = {}


def _factor_prime_power(m: int):
    for p in range(2, m + 1):
        if m % p == 0:
            e = 0
            q = m
            while q % p == 0:
                q //= p
                e += 1
            if q != 1:
                raise ValueError(f"{m} is not a prime power")
            return p, e
    raise ValueError("modulus must be >= 2")


def build_unitriangular(n: int, m: int, cap=8192) -> FiniteGroup:
    """U_n(Z/m): unipotent upper-triangular (n+1)x(n+1) matrices over Z/m,
    generated by the superdiagonal elementary matrices."""
    key = (n, m)
    if key in _UT_CACHE:
        return _UT_CACHE[key]
    gens = []
    for i in range(n):
        e = np.eye(n + 1, dtype=np.int64)
        e[i, i + 1] = 1
        gens.append(MatMod(e, m))
    G = generate_group(gens, cap=cap, name=f"U{n}(Z/{m})")
    assert G.order == m ** (n * (n + 1) // 2)
    _UT_CACHE[key] = G
    return G


@dataclass
class CentralExtension:
    """0 -> Z -> E -> Gbar -> 1 with Z central of order p and a chosen
    normalized set-section Gbar -> E."""
    Z: FiniteGroup
    E: FiniteGroup
    Gbar: FiniteGroup
    iota: GroupHom
    lam: GroupHom
    section: np.ndarray
    p: int
    label: str = ""
    gammas: list = field(default_factory=list)     # assumption (I) witnesses
    z_embed: GroupHom | None = None                # assumption (II) witness

    def __post_init__(self):
        assert self.iota.is_injective()
        z_img = set(int(x) for x in self.iota.image)
        cen = _central_ids(self.E)
        assert z_img <= cen, "kernel copy must be central"
        assert self.lam.is_surjective()
        ker = set(int(x) for x in np.nonzero(self.lam.image == 0)[0])
        assert ker == z_img, "kernel of projection must equal image of iota"
        assert self.section[0] == 0
        assert np.array_equal(self.lam.image[self.section],
                              np.arange(self.Gbar.order))

    def verify_family_witnesses(self):
        assert self.gammas, "no assumption (I) witnesses stored"
        kers = [g.kernel() for g in self.gammas]
        assert intersect_subgroups(kers).order == 1
        assert self.z_embed is not None and self.z_embed.is_injective()
        assert self.z_embed.domain.key == self.Z.key
        assert self.z_embed.codomain.key == self.Gbar.key

    def section_hash(self):
        import hashlib
        return hashlib.sha1(self.section.astype(np.int32).tobytes()).hexdigest()

    def report(self):
        return {
            "label": self.label,
            "orders": {"Z": self.Z.order, "E": self.E.order,
                       "Gbar": self.Gbar.order},
            "p": self.p,
            "section_hash": self.section_hash(),
        }


def _central_ids(G: FiniteGroup):
    mask = np.ones(G.order, dtype=bool)
    for s in G.generators:
        mask &= G.mult[:, s] == G.mult[s, :]
    return set(int(x) for x in np.nonzero(mask)[0])


def _matrix_id(E: FiniteGroup, entries, m: int) -> int:
    return element_index(E)[MatMod(entries, m)]


def build_bar_extension(n: int, m: int) -> CentralExtension:
    """Central extension of U_n(Z/m) by the order-p subgroup of the corner.

    For m = p this is 0 -> R+ -> U_n(Z/p) -> Ubar_n(Z/p) -> 1 with the full
    corner as kernel; for m = p^e (e > 1) the kernel is p^(e-1) times the
    corner, which is the building block of the lower-central family."""
    key = ("bar", n, m)
    if key in _UT_CACHE:
        return _UT_CACHE[key]
    p, e = _factor_prime_power(m)
    if n == 1 and e == 1:
        raise ValueError("the n=1 prime-modulus extension has a trivial quotient")
    E = build_unitriangular(n, m)
    size = n + 1
    corner_gen = np.eye(size, dtype=np.int64)
    corner_gen[0, n] = p ** (e - 1)
    corner_id = _matrix_id(E, corner_gen, m)
    z_ids = [0]
    cur = 0
    for _ in range(p - 1):
        cur = E.mul(cur, corner_id)
        z_ids.append(cur)
    Zsub = subgroup_generated(E, [corner_id])
    assert Zsub.order == p

    Z = generate_group([Residue(1, p)], name=f"Z/{p}")
    iota = GroupHom(Z, E, np.asarray(z_ids, dtype=np.int32))
    Gbar, lam = quotient_group(E, Zsub)
    Gbar.name = f"Ubar{n}(Z/{m})"

    # section: the coset representative whose corner entry is < p^(e-1)
    corners = np.asarray([el.entries[0, n] for el in E.elements], dtype=np.int64)
    section = np.full(Gbar.order, -1, dtype=np.int32)
    small = np.nonzero(corners < p ** (e - 1))[0]
    section[lam.image[small]] = small
    assert section.min() >= 0

    ext = CentralExtension(Z, E, Gbar, iota, lam, section, p,
                           label=f"bar({n},{m})")

    # assumption (I) witnesses
    gammas = []
    if n == 1:
        # E is cyclic Z/m; Gbar = Z/p^(e-1) embeds by multiplication by p
        img = np.asarray([_matrix_id(E, _corner_matrix(size, p * int(corners[section[x]]), n), m)
                          for x in range(Gbar.order)], dtype=np.int32)
        gammas.append(GroupHom(Gbar, E, img))
    else:
        gammas.append(_row_col_gamma(ext, kill="row"))
        gammas.append(_row_col_gamma(ext, kill="col"))
        if e > 1:
            T = build_unitriangular(n, p ** (e - 1))
            img = np.asarray(
                [_matrix_id(T, E.elements[section[x]].entries % (p ** (e - 1)),
                            p ** (e - 1))
                 for x in range(Gbar.order)], dtype=np.int32)
            gammas.append(GroupHom(Gbar, T, img))
    ext.gammas = gammas

    # assumption (II) witness: Z/p embeds into Gbar
    if n == 1:
        w = _matrix_id(E, _corner_matrix(size, p ** (e - 2), n), m) if e >= 2 else 0
    else:
        sup = np.eye(size, dtype=np.int64)
        sup[0, 1] = p ** (e - 1)
        w = _matrix_id(E, sup, m)
    wq = lam.image[w]
    emb = [0]
    cur = 0
    for _ in range(p - 1):
        cur = Gbar.mul(cur, wq)
        emb.append(cur)
    ext.z_embed = GroupHom(Z, Gbar, np.asarray(emb, dtype=np.int32))

    ext.verify_family_witnesses()
    _UT_CACHE[key] = ext
    return ext


def _corner_matrix(size, value, n):
    a = np.eye(size, dtype=np.int64)
    a[0, n] = value
    return a


def _row_col_gamma(ext: CentralExtension, kill: str) -> GroupHom:
    """Gbar -> E sending a class to its representative with the first row
    (resp. last column) replaced by the identity's."""
    E, Gbar, m = ext.E, ext.Gbar, ext.E.elements[0].modulus
    size = E.elements[0].entries.shape[0]
    img = np.empty(Gbar.order, dtype=np.int32)
    for x in range(Gbar.order):
        a = np.array(E.elements[ext.section[x]].entries)
        if kill == "row":
            a[0, 1:] = 0
        else:
            a[:size - 1, size - 1] = 0
        img[x] = _matrix_id(E, a, m)
    return GroupHom(Gbar, E, img)


def build_mp3(p: int) -> CentralExtension:
    """M_{p^3}: the order-p^3, exponent-p^2 group with presentation
    r^(p^2) = s^p = 1, [r,s] = r^p, as the central extension
    0 -> Z/p -> M_{p^3} -> (Z/p)^2 -> 1 with r -> (1,0), s -> (0,1)."""
    if p % 2 == 0 or p < 3:
        raise ValueError("p must be an odd prime")
    key = ("mp3", p)
    if key in _UT_CACHE:
        return _UT_CACHE[key]
    q = p * p
    # affine permutations of Z/p^2: r = translation by 1, s = scaling by 1-p
    r = Perm([(x + 1) % q for x in range(q)])
    s = Perm([((1 - p) * x) % q for x in range(q)])
    E = generate_group([r, s], name=f"M{p}^3")
    assert E.order == p ** 3
    r_id, s_id = E.generators

    # presentation relations
    from .core import element_order, exponent
    assert element_order(E, r_id) == q and element_order(E, s_id) == p
    assert exponent(E) == q
    rp = E.power(r_id, p)
    assert E.commutator(r_id, s_id) == rp

    Zsub = subgroup_generated(E, [rp])
    Z = generate_group([Residue(1, p)], name=f"Z/{p}")
    iota = GroupHom(Z, E, np.asarray([E.power(rp, k) for k in range(p)],
                                     dtype=np.int32))
    Gbar, lam = quotient_group(E, Zsub)
    Gbar.name = f"(Z/{p})^2"

    # coordinates on Gbar: class of r^a s^b -> (a, b)
    coords = np.full((Gbar.order, 2), -1, dtype=np.int32)
    section = np.full(Gbar.order, -1, dtype=np.int32)
    for a in range(p):
        for b in range(p):
            eid = E.mul(E.power(r_id, a), E.power(s_id, b))
            x = int(lam.image[eid])
            assert section[x] == -1
            section[x] = eid
            coords[x] = (a, b)
    ext = CentralExtension(Z, E, Gbar, iota, lam, section, p,
                           label=f"mp3({p})")
    ext._coords = coords

    # assumption (I): (Z/p)^2 embeds back into M_{p^3} via
    # (1,0) -> r^p, (0,1) -> s r^p
    srp = E.mul(s_id, rp)
    img = np.asarray([E.mul(E.power(rp, int(coords[x, 0])),
                            E.power(srp, int(coords[x, 1])))
                      for x in range(Gbar.order)], dtype=np.int32)
    gamma = GroupHom(Gbar, E, img)
    assert gamma.is_injective()
    ext.gammas = [gamma]

    # assumption (II): Z/p -> (Z/p)^2 along the first coordinate
    rq = int(lam.image[r_id])
    emb = [0]
    cur = 0
    for _ in range(p - 1):
        cur = Gbar.mul(cur, rq)
        emb.append(cur)
    ext.z_embed = GroupHom(Z, Gbar, np.asarray(emb, dtype=np.int32))
    ext.verify_family_witnesses()
    _UT_CACHE[key] = ext
    return ext


@dataclass
class OmegaFamily:
    label: str
    p: int
    n: int | None
    extensions: list

    def __post_init__(self):
        for ext in self.extensions:
            ext.verify_family_witnesses()

    def __repr__(self):
        return f"OmegaFamily({self.label}, {len(self.extensions)} extensions)"


def omega_family(label: str, n: int | None, p: int) -> OmegaFamily:
    """The three extension families:

    - zassenhaus(n,p): the single extension over U_n(Z/p), n >= 2;
    - lower-central(n,p): the n extensions with E = U_s(Z/p^(n-s+1));
    - mixed(p): Z/p^2 over Z/p together with M_{p^3} over (Z/p)^2 (p odd).
    """
    if label == "zassenhaus":
        assert n is not None and n >= 2
        exts = [build_bar_extension(n, p)]
    elif label == "lower-central":
        assert n is not None and n >= 2
        exts = [build_bar_extension(s, p ** (n - s + 1)) for s in range(1, n + 1)]
    elif label == "mixed":
        exts = [build_bar_extension(1, p * p), build_mp3(p)]
        n = None
    else:
        raise ValueError(f"unknown family label {label!r}")
    name = f"{label}({n},{p})" if n is not None else f"{label}({p})"
    fam = OmegaFamily(name, p, n, exts)
    return fam


def parse_family(spec: str) -> OmegaFamily:
    """Parse 'zassenhaus:n:p', 'lower-central:n:p' or 'mixed:p'."""
    parts = spec.split(":")
    if parts[0] == "mixed":
        return omega_family("mixed", None, int(parts[1]))
    return omega_family(parts[0], int(parts[1]), int(parts[2]))
