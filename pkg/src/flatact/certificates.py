"""Action certificates and their verification.

Two certificate kinds are handled.  A torus certificate packages a
finite group G, a normal abelian subgroup A with quotient Q, an integral
representation of Q and an equivariant surjection alpha: Z^n -> A; it is
accepted when the extension class of G lies in the image of
H^2(Q; Z^n) -> H^2(Q; A).  A flat certificate additionally carries a
holonomy group Phi normal in a matrix group Phi*, a 2-cocycle for the
crystallographic extension of Phi* and a coboundary witness tying it to
G's extension class; acceptance further requires the subextension over
Phi with lattice ker(alpha) to be torsion-free.

Verification produces an ordered checklist so a rejection pinpoints the
failing condition; structural problems raise CertificateError instead
(malformed input, not a mathematical verdict).
"""

from dataclasses import dataclass, field
from math import prod

from .groups import (
    FiniteGroup,
    GroupError,
    GroupHom,
    PermGroup,
    Permutation,
    TableGroup,
    abelian_normal_subgroups,
    find_isomorphism,
    group_from_text,
    group_to_text,
    iter_isomorphisms,
    subgroup_closure,
)
from .zlinalg import (
    AbHom,
    FinAbGroup,
    IntMatrix,
    ZLinAlgError,
    kernel_basis,
    solve_integer,
    sublattice_index,
)
from .cohomology import (
    Cocycle2,
    CohomologyError,
    ZQModule,
    _SolveCache,
    _hcat,
    extension_class,
    h2,
    induced_h2,
    is_in_image,
    torsion_free_check,
)


class CertificateError(Exception):
    """Structural problem with a certificate (malformed, not rejected)."""


# ---------------------------------------------------------------------------
# crystallographic element arithmetic

@dataclass(frozen=True)
class CrystalElement:
    """Element (v, phi) of the crystallographic extension determined by a
    lattice module and a 2-cocycle: v is the translation part, phi the
    rotation part."""

    v: tuple
    phi: object
    ambient: tuple  # (ZQModule, Cocycle2)

    def __post_init__(self):
        module, _ = self.ambient
        if len(self.v) != module.rank:
            raise CertificateError("translation part has wrong length")


def crystal_multiply(a, b):
    if a.ambient is not b.ambient and a.ambient != b.ambient:
        raise CertificateError("ambient mismatch in crystal multiplication")
    module, cocycle = a.ambient
    grp = module.group
    v = tuple(
        x + y + z
        for x, y, z in zip(
            a.v, module.act_matrix(a.phi).apply(b.v), cocycle.value(a.phi, b.phi)
        )
    )
    return CrystalElement(v, grp.multiply(a.phi, b.phi), a.ambient)


def crystal_identity(ambient):
    module, _ = ambient
    return CrystalElement(module.zero(), module.group.identity(), ambient)


def crystal_power(a, k):
    out = crystal_identity(a.ambient)
    for _ in range(k):
        out = crystal_multiply(out, a)
    return out


def crystal_is_identity(a):
    module, _ = a.ambient
    return a.phi == module.group.identity() and not any(a.v)


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    verdict: bool
    checklist: list
    witnesses: dict = field(default_factory=dict)

    def failed_check(self):
        for c in self.checklist:
            if not c.passed:
                return c.name
        return None

    def to_dict(self):
        return {
            "verdict": "accepted" if self.verdict else "rejected",
            "checklist": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checklist
            ],
            "witnesses": {k: _jsonable(v) for k, v in self.witnesses.items()},
        }


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, list):
        return [_jsonable(x) for x in v]
    if isinstance(v, Permutation):
        return list(v.images)
    if isinstance(v, IntMatrix):
        return [list(r) for r in v.data]
    return v


# ---------------------------------------------------------------------------
# certificates

def _check_matrix(obj, rows, cols, what):
    if not isinstance(obj, IntMatrix):
        raise CertificateError("%s must be an integer matrix" % what)
    if obj.rows != rows or obj.cols != cols:
        raise CertificateError(
            "%s must be %dx%d, got %dx%d" % (what, rows, cols, obj.rows, obj.cols)
        )


class TorusCertificate:
    """Data of the torus action criterion for G acting on T^n.

    a_generators must present A as a direct sum: A is the inner direct
    product of the cyclic groups they generate, with orders forming a
    divisibility chain; coordinates of A refer to this basis.
    """

    kind = "torus"

    def __init__(self, group, a_generators, n, rho, alpha, q=None):
        self.group = group
        self.a_generators = list(a_generators)
        self.n = int(n)
        self.rho = list(rho)
        self.alpha = alpha
        self.q = q
        if self.n < 0:
            raise CertificateError("dimension must be non-negative")
        for m in self.rho:
            _check_matrix(m, self.n, self.n, "rho matrix")
            if not m.is_unimodular():
                raise CertificateError("rho matrix is not unimodular")
        if not self.a_generators:
            # trivial A: normalize alpha to the empty map out of Z^n
            if alpha.rows != 0:
                raise CertificateError("alpha must have no rows for trivial A")
            self.alpha = IntMatrix.zero(0, self.n)
        else:
            _check_matrix(alpha, len(self.a_generators), self.n, "alpha")

    def to_dict(self):
        d = {
            "kind": self.kind,
            "n": self.n,
            "group": group_to_text(self.group),
            "A_generators": [_encode_element(x) for x in self.a_generators],
            "rho": [_jsonable(m) for m in self.rho],
            "alpha": _jsonable(self.alpha),
        }
        if self.q is not None:
            d["Q"] = group_to_text(self.q)
        return d

    def __eq__(self, other):
        return isinstance(other, TorusCertificate) and self.to_dict() == other.to_dict()


class FlatCertificate(TorusCertificate):
    """Data of the flat-manifold action criterion.

    On top of the torus fields (which describe the finite side G, A, Q
    and alpha), carries the holonomy group phi inside phi_star, the
    integral representation rho of phi_star, the 2-cocycle of the
    crystallographic extension of phi_star, and the coboundary witness
    relating its alpha-pushforward to the extension class of G.
    """

    kind = "flat"

    def __init__(self, group, a_generators, n, rho, alpha,
                 phi, phi_star, cocycle, coboundary_witness, q=None):
        self.phi_star = phi_star
        self.phi = list(phi)
        self.cocycle = dict(cocycle)              # (g, h) -> vector in Z^n
        self.coboundary_witness = dict(coboundary_witness)  # g -> A coords
        super().__init__(group, a_generators, n, rho, alpha, q=q)
        for x in self.phi:
            if not phi_star.contains(x):
                raise CertificateError("phi element outside phi_star")
        k = len(self.a_generators)
        for (g, h), v in self.cocycle.items():
            if len(v) != self.n:
                raise CertificateError("cocycle value has wrong length")
            if not (phi_star.contains(g) and phi_star.contains(h)):
                raise CertificateError("cocycle indexed by foreign elements")
        for g, v in self.coboundary_witness.items():
            if len(v) != k:
                raise CertificateError("witness value has wrong length")
            if not phi_star.contains(g):
                raise CertificateError("witness indexed by foreign element")

    def to_dict(self):
        d = super().to_dict()
        d["phi"] = [_encode_element(x) for x in self.phi]
        d["phi_star"] = group_to_text(self.phi_star)
        els = _sorted_elements(self.phi_star)
        order = {x: i for i, x in enumerate(els)}
        d["cocycle"] = [
            [_encode_element(g), _encode_element(h), list(v)]
            for (g, h), v in sorted(
                self.cocycle.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]])
            )
        ]
        d["coboundary_witness"] = [
            [_encode_element(g), list(v)]
            for g, v in sorted(self.coboundary_witness.items(), key=lambda kv: order[kv[0]])
        ]
        return d


def _encode_element(x):
    return list(x.images) if isinstance(x, Permutation) else int(x)


def _decode_element(group, obj, what):
    if isinstance(group, PermGroup):
        if not isinstance(obj, list):
            raise CertificateError("%s: expected a permutation image list" % what)
        try:
            return Permutation(tuple(int(v) for v in obj))
        except (GroupError, ValueError, TypeError):
            raise CertificateError("%s: not a valid permutation" % what)
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise CertificateError("%s: expected an element index" % what)
    return obj


def _sorted_elements(group):
    return group.elements()


def _decode_matrix(obj, what):
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise CertificateError("%s: expected a list of rows" % what)
    try:
        return IntMatrix.from_rows(obj)
    except (ZLinAlgError, TypeError, ValueError):
        raise CertificateError("%s: not a valid integer matrix" % what)


_TORUS_FIELDS = {"kind", "n", "group", "A_generators", "Q", "rho", "alpha"}
_FLAT_FIELDS = _TORUS_FIELDS | {
    "phi", "phi_star", "cocycle", "coboundary_witness"
}


def certificate_from_dict(d):
    """Parse a certificate from its JSON dictionary; unknown fields and
    structural problems raise CertificateError."""
    if not isinstance(d, dict):
        raise CertificateError("certificate must be a JSON object")
    kind = d.get("kind")
    if kind not in ("torus", "flat"):
        raise CertificateError("kind must be 'torus' or 'flat'")
    allowed = _TORUS_FIELDS if kind == "torus" else _FLAT_FIELDS
    unknown = set(d) - allowed
    if unknown:
        raise CertificateError("unknown fields: %s" % ", ".join(sorted(unknown)))
    required = (allowed - {"Q"})
    missing = required - set(d)
    if missing:
        raise CertificateError("missing fields: %s" % ", ".join(sorted(missing)))

    try:
        group = group_from_text(d["group"])
    except (GroupError, ValueError, TypeError, IndexError) as exc:
        raise CertificateError("group: %s" % exc)
    if not isinstance(d["n"], int) or isinstance(d["n"], bool):
        raise CertificateError("n must be an integer")
    n = d["n"]
    q = None
    if "Q" in d:
        try:
            q = group_from_text(d["Q"])
        except (GroupError, ValueError, TypeError, IndexError) as exc:
            raise CertificateError("Q: %s" % exc)
    if not isinstance(d["A_generators"], list):
        raise CertificateError("A_generators must be a list")
    a_gens = [
        _decode_element(group, o, "A_generators[%d]" % i)
        for i, o in enumerate(d["A_generators"])
    ]
    for i, x in enumerate(a_gens):
        if not group.contains(x):
            raise CertificateError("A_generators[%d] is not in the group" % i)
    if not isinstance(d["rho"], list):
        raise CertificateError("rho must be a list of matrices")
    rho = [_decode_matrix(m, "rho[%d]" % i) for i, m in enumerate(d["rho"])]
    for i, m in enumerate(rho):
        if m.rows != n or m.cols != n:
            raise CertificateError("rho[%d] has wrong dimension" % i)
        if not m.is_unimodular():
            raise CertificateError("rho[%d] is not unimodular" % i)
    alpha = _decode_matrix(d["alpha"], "alpha")

    if kind == "torus":
        return TorusCertificate(group, a_gens, n, rho, alpha, q=q)

    try:
        phi_star = group_from_text(d["phi_star"])
    except (GroupError, ValueError, TypeError, IndexError) as exc:
        raise CertificateError("phi_star: %s" % exc)
    if not isinstance(d["phi"], list):
        raise CertificateError("phi must be a list of elements")
    phi = [
        _decode_element(phi_star, o, "phi[%d]" % i) for i, o in enumerate(d["phi"])
    ]
    if not isinstance(d["cocycle"], list):
        raise CertificateError("cocycle must be a list of entries")
    cocycle = {}
    for i, entry in enumerate(d["cocycle"]):
        if not isinstance(entry, list) or len(entry) != 3:
            raise CertificateError("cocycle[%d]: expected [g, h, value]" % i)
        g = _decode_element(phi_star, entry[0], "cocycle[%d].g" % i)
        h = _decode_element(phi_star, entry[1], "cocycle[%d].h" % i)
        if not isinstance(entry[2], list):
            raise CertificateError("cocycle[%d]: value must be a list" % i)
        cocycle[(g, h)] = tuple(int(x) for x in entry[2])
    if not isinstance(d["coboundary_witness"], list):
        raise CertificateError("coboundary_witness must be a list of entries")
    witness = {}
    for i, entry in enumerate(d["coboundary_witness"]):
        if not isinstance(entry, list) or len(entry) != 2:
            raise CertificateError(
                "coboundary_witness[%d]: expected [g, value]" % i
            )
        g = _decode_element(phi_star, entry[0], "coboundary_witness[%d].g" % i)
        if not isinstance(entry[1], list):
            raise CertificateError("coboundary_witness[%d]: value must be a list" % i)
        witness[g] = tuple(int(x) for x in entry[1])
    return FlatCertificate(group, a_gens, n, rho, alpha, phi, phi_star,
                           cocycle, witness, q=q)


# ---------------------------------------------------------------------------
# the A-presentation behind a certificate

def abelian_identification(group, a_generators):
    """(elements of A, FinAbGroup, element -> coordinates dict) for a
    subgroup presented as an inner direct sum by a_generators.

    Raises CertificateError when the generators do not exhibit a direct
    sum with invariant-factor orders."""
    if not a_generators:
        return [group.identity()], FinAbGroup(()), {group.identity(): ()}
    a_els = subgroup_closure(group, a_generators)
    orders = [group.element_order(x) for x in a_generators]
    for o in orders:
        if o < 2:
            raise CertificateError("identity listed among A generators")
    for a, b in zip(orders, orders[1:]):
        if b % a != 0:
            raise CertificateError(
                "A generator orders must form a divisibility chain"
            )
    if prod(orders) != len(a_els):
        raise CertificateError(
            "A generators do not present the subgroup as a direct sum"
        )
    a_group = FinAbGroup(tuple(orders))
    ident = {}
    for coords in a_group.elements():
        x = group.identity()
        for c, gen in zip(coords, a_generators):
            p = group.identity()
            for _ in range(c):
                p = group.multiply(p, gen)
            x = group.multiply(x, p)
        if x in ident:
            raise CertificateError(
                "A generators do not present the subgroup as a direct sum"
            )
        ident[x] = coords
    return a_els, a_group, ident


# ---------------------------------------------------------------------------
# verification

class _Checklist:
    def __init__(self):
        self.items = []
        self.witnesses = {}

    def record(self, name, passed, detail=""):
        self.items.append(CheckResult(name, bool(passed), detail))
        return bool(passed)

    def report(self):
        verdict = all(c.passed for c in self.items)
        return VerificationReport(verdict, self.items, self.witnesses)


def _equivariance_holds(alpha_matrix, lattice_mod, fin_mod, elem_pairs):
    """alpha . rho(g) == act_A(g') . alpha modulo the invariant factors,
    over the supplied (g, g') pairs."""
    factors = fin_mod.invariant_factors
    for g, gq in elem_pairs:
        left = alpha_matrix * lattice_mod.act_matrix(g)
        right = fin_mod.act_matrix(gq) * alpha_matrix
        diff = left + (-right)
        for r in range(diff.rows):
            for x in diff.data[r]:
                if x % factors[r] != 0:
                    return False
    return True


def verify_torus_certificate(cert, group_bound=64, rank_bound=12):
    """Ordered checklist verification of a torus certificate."""
    cl = _Checklist()
    a_els, a_group, ident = abelian_identification(cert.group, cert.a_generators)
    k = a_group.rank

    # 1. exactness of 1 -> A -> G -> Q -> 1
    try:
        ext = extension_class(cert.group, a_els, ident, a_group)
    except CohomologyError as exc:
        cl.record("extension-exact", False, str(exc))
        return cl.report()
    detail = "A of order %d, Q of order %d" % (a_group.order, ext.quotient.order())
    if cert.q is not None and find_isomorphism(ext.quotient, cert.q) is None:
        cl.record("extension-exact", False,
                  "computed quotient is not isomorphic to the supplied Q")
        return cl.report()
    cl.record("extension-exact", True, detail)

    # 2. rho is a faithful integral representation of Q
    if len(cert.rho) != len(ext.quotient.generators()):
        raise CertificateError(
            "rho needs %d matrices (one per quotient generator), got %d"
            % (len(ext.quotient.generators()), len(cert.rho))
        )
    try:
        lat_mod = ZQModule.lattice(ext.quotient, cert.rho, rank=cert.n)
    except CohomologyError as exc:
        cl.record("rho-representation", False, str(exc))
        return cl.report()
    cl.record("rho-representation", True)
    if not cl.record("rho-faithful", lat_mod.is_faithful(),
                     "" if lat_mod.is_faithful() else "kernel is nontrivial"):
        return cl.report()

    # 3. alpha surjective
    try:
        alpha_hom = AbHom(cert.n, a_group, cert.alpha)
    except ZLinAlgError as exc:
        raise CertificateError("alpha: %s" % exc)
    if not cl.record("alpha-surjective", alpha_hom.is_surjective(),
                     "image must be all of A"):
        return cl.report()

    # 4. alpha equivariant for the conjugation action of Q on A
    pairs = [(qe, qe) for qe in ext.quotient.elements()]
    if not cl.record(
        "alpha-equivariant",
        _equivariance_holds(cert.alpha, lat_mod, ext.module, pairs),
        "alpha(g.x) must equal g.alpha(x)",
    ):
        return cl.report()

    # 5. the extension class lies in the image of H^2(Q;Z^n) -> H^2(Q;A)
    h_lat = h2(lat_mod, group_bound=group_bound, rank_bound=rank_bound)
    h_fin = h2(ext.module, group_bound=group_bound, rank_bound=rank_bound)
    induced = induced_h2(alpha_hom, h_lat, h_fin)
    target = h_fin.class_of(ext.cocycle)
    pre = is_in_image(target, induced)
    cl.witnesses["extension_class"] = target
    cl.witnesses["h2_lattice"] = h_lat.group.invariant_factors
    cl.witnesses["h2_finite"] = h_fin.group.invariant_factors
    if pre is None:
        cl.record("class-in-image", False,
                  "extension class %s has no lattice preimage" % (target,))
        return cl.report()
    cl.witnesses["h2_preimage"] = pre
    cl.record("class-in-image", True, "preimage class %s" % (pre,))
    return cl.report()


def verify_flat_certificate(cert, group_bound=64, rank_bound=12):
    """Ordered checklist verification of a flat-manifold certificate."""
    best = None
    for report in _flat_attempts(cert, group_bound, rank_bound):
        if report.verdict:
            return report
        passes = sum(1 for c in report.checklist if c.passed)
        if best is None or passes > best[0]:
            best = (passes, report)
    return best[1]


def _flat_attempts(cert, group_bound, rank_bound):
    cl = _Checklist()
    a_els, a_group, ident = abelian_identification(cert.group, cert.a_generators)

    # 1. phi normal in phi_star
    for x in cert.phi:
        if not cert.phi_star.contains(x):
            raise CertificateError("phi element outside phi_star")
    phi_els = subgroup_closure(cert.phi_star, cert.phi) if cert.phi else \
        [cert.phi_star.identity()]
    from .groups import is_normal
    normal = (not cert.phi) or is_normal(cert.phi_star, cert.phi)
    if not cl.record("phi-normal", normal, "phi must be normal in phi_star"):
        yield cl.report()
        return

    # 2. rho faithful on phi_star
    if len(cert.rho) != len(cert.phi_star.generators()):
        raise CertificateError(
            "rho needs %d matrices (one per phi_star generator), got %d"
            % (len(cert.phi_star.generators()), len(cert.rho))
        )
    try:
        star_mod = ZQModule.lattice(cert.phi_star, cert.rho, rank=cert.n)
    except CohomologyError as exc:
        cl.record("rho-representation", False, str(exc))
        yield cl.report()
        return
    cl.record("rho-representation", True)
    if not cl.record("rho-faithful", star_mod.is_faithful(),
                     "" if star_mod.is_faithful() else "kernel is nontrivial"):
        yield cl.report()
        return

    # 3. Q = phi_star/phi matches G/A
    from .groups import quotient_group
    q_star, star_proj, _ = quotient_group(cert.phi_star, phi_els)
    try:
        ext = extension_class(cert.group, a_els, ident, a_group)
    except CohomologyError as exc:
        cl.record("quotient-match", False, str(exc))
        yield cl.report()
        return
    if cert.q is not None and find_isomorphism(q_star, cert.q) is None:
        cl.record("quotient-match", False,
                  "phi_star/phi is not isomorphic to the supplied Q")
        yield cl.report()
        return
    isos = list(iter_isomorphisms(q_star, ext.quotient))
    if not isos:
        cl.record("quotient-match", False,
                  "phi_star/phi (order %d) is not isomorphic to G/A (order %d)"
                  % (q_star.order(), ext.quotient.order()))
        yield cl.report()
        return

    base_items = list(cl.items)
    base_witnesses = dict(cl.witnesses)
    for iso in isos:
        cl2 = _Checklist()
        cl2.items = list(base_items)
        cl2.witnesses = dict(base_witnesses)
        cl2.record("quotient-match", True,
                   "quotients of order %d identified" % q_star.order())
        yield _flat_verify_with_iso(cert, cl2, a_els, a_group, ident, ext,
                                    star_mod, star_proj, iso,
                                    group_bound, rank_bound)


def _flat_verify_with_iso(cert, cl, a_els, a_group, ident, ext,
                          star_mod, star_proj, iso, group_bound, rank_bound):
    # bar: map phi_star -> G/A coset group
    def bar(g):
        return iso(star_proj(g))

    # 4. alpha surjective and (phi_star, Q)-equivariant
    try:
        alpha_hom = AbHom(cert.n, a_group, cert.alpha)
    except ZLinAlgError as exc:
        raise CertificateError("alpha: %s" % exc)
    if not cl.record("alpha-surjective", alpha_hom.is_surjective(),
                     "image must be all of A"):
        return cl.report()
    pairs = [(g, bar(g)) for g in cert.phi_star.elements()]
    if not cl.record(
        "alpha-equivariant",
        _equivariance_holds(cert.alpha, star_mod, ext.module, pairs),
        "alpha(g.x) must equal bar(g).alpha(x)",
    ):
        return cl.report()

    # 5. the supplied c* is a cocycle and the witness b satisfies
    #    alpha_*(c*) - inflation of G's class = d^1 b over phi_star
    cstar = Cocycle2(star_mod, cert.cocycle)
    if not cl.record("cocycle-valid", cstar.is_cocycle(),
                     "c* fails the cocycle identity"):
        return cl.report()
    factors = a_group.invariant_factors
    e_star = cert.phi_star.identity()

    def bval(g):
        if g == e_star:
            return a_group.zero()
        return a_group.reduce(cert.coboundary_witness.get(g, a_group.zero()))

    witness_ok = True
    for g in cert.phi_star.elements():
        for h in cert.phi_star.elements():
            lhs = a_group.reduce(alpha_hom.apply(cstar.value(g, h)))
            lhs = a_group.sub(lhs, ext.cocycle.value(bar(g), bar(h)))
            rhs = ext.module.act(bar(g), bval(h))
            rhs = a_group.sub(rhs, bval(cert.phi_star.multiply(g, h)))
            rhs = a_group.add(rhs, bval(g))
            if lhs != rhs:
                witness_ok = False
                break
        if not witness_ok:
            break
    if not cl.record("coboundary-witness", witness_ok,
                     "alpha-pushforward of c* must differ from the extension "
                     "class of G by the coboundary of b"):
        return cl.report()

    # 6. N = ker alpha is a full sublattice of index |A|
    basis = kernel_basis(alpha_hom)
    idx = sublattice_index(basis, cert.n)
    if not cl.record(
        "kernel-lattice",
        idx == a_group.order,
        "ker alpha must have full rank and index |A| (got index %s)" % (idx,),
    ):
        return cl.report()
    cl.witnesses["kernel_index"] = idx

    # 7. the subextension over phi with lattice N is torsion-free
    phi_els = subgroup_closure(cert.phi_star, cert.phi) if cert.phi else \
        [cert.phi_star.identity()]
    h_phi = TableGroup.from_function(phi_els, cert.phi_star.multiply,
                                     cert.phi_star.identity())
    lookup = {i: x for i, x in enumerate(phi_els)}
    solver = _SolveCache(basis.transpose())

    def n_coords(vec):
        y = solver.solve(tuple(vec))
        if y is None:
            raise CertificateError("vector expected in ker alpha is outside it")
        return tuple(y)

    gen_mats = []
    for hg in h_phi.generators():
        rho_m = star_mod.act_matrix(lookup[hg])
        cols = [n_coords(rho_m.apply(basis.row(j))) for j in range(basis.rows)]
        gen_mats.append(IntMatrix.from_rows(
            [[cols[j][i] for j in range(len(cols))] for i in range(basis.rows)]
        ))
    sub_mod = ZQModule.lattice(h_phi, gen_mats, rank=basis.rows)

    # 8. phi acts effectively on N (independent re-check)
    if not cl.record("phi-effective", sub_mod.is_faithful(),
                     "holonomy must act faithfully on ker alpha"):
        return cl.report()

    # section adjustment s with alpha(s(phi)) = -b(phi)
    rel = IntMatrix.diagonal(factors)
    stacked = _hcat(cert.alpha, rel)
    s_of = {h_phi.identity(): (0,) * cert.n}
    for hg in h_phi.elements():
        if hg == h_phi.identity():
            continue
        target = tuple(-x for x in bval(lookup[hg]))
        sol = solve_integer(stacked, target)
        if sol is None:
            raise CertificateError("alpha is not surjective onto the witness values")
        s_of[hg] = tuple(sol[:cert.n])

    values = {}
    for g1 in h_phi.elements():
        for g2 in h_phi.elements():
            if g1 == h_phi.identity() or g2 == h_phi.identity():
                continue
            v = list(cstar.value(lookup[g1], lookup[g2]))
            rho1 = star_mod.act_matrix(lookup[g1])
            sv = rho1.apply(s_of[g2])
            prod12 = h_phi.multiply(g1, g2)
            v = [a + b - c + d for a, b, c, d in
                 zip(v, sv, s_of[prod12], s_of[g1])]
            values[(g1, g2)] = n_coords(v)
    sub_cocycle = Cocycle2(sub_mod, values)
    tf, witness = torsion_free_check(h_phi, sub_mod, sub_cocycle)
    if not tf:
        x, phi_el = witness
        cl.witnesses["torsion_element"] = {
            "translation": x, "rotation": _encode_element(lookup[phi_el])
        }
    cl.record("torsion-free", tf,
              "" if tf else "kernel of the induced map has torsion")
    return cl.report()


# ---------------------------------------------------------------------------
# Jordan witness

@dataclass(frozen=True)
class JordanQuery:
    n: int
    bound: int
    group: object

    def __post_init__(self):
        if self.bound < 1:
            raise CertificateError("bound must be at least 1")


def jordan_witness(query, order_bound=20000):
    """The abelian normal subgroup of minimal index, or None when that
    index exceeds the query bound.  Returns (subgroup elements, index)."""
    subs = abelian_normal_subgroups(query.group, order_bound=order_bound)
    best = max(subs, key=len)
    index = query.group.order() // len(best)
    if index > query.bound:
        return None
    return best, index


# ---------------------------------------------------------------------------
# the worked 2-torus example

def build_a4_certificate():
    """Torus certificate for the alternating group on four letters acting
    on T^2: A = the Klein four-group of double transpositions, Q cyclic
    of order 3 acting through a matrix of order 3, alpha = reduction
    modulo 2."""
    g = PermGroup.alternating(4)
    gen1 = Permutation.from_cycles(4, [(0, 1), (2, 3)])
    gen2 = Permutation.from_cycles(4, [(0, 2), (1, 3)])
    a_gens = [gen1, gen2]
    a_els, a_group, ident = abelian_identification(g, a_gens)
    ext = extension_class(g, a_els, ident, a_group)
    (qg,) = ext.quotient.generators()
    action = ext.module.act_matrix(qg)
    rho_order3 = IntMatrix.from_rows([[0, -1], [1, -1]])
    if action.data == ((0, 1), (1, 1)):
        rho = [rho_order3]
    else:
        # the quotient generator acts by the square; use rho^2 = rho^{-1}
        rho = [rho_order3 * rho_order3]
    alpha = IntMatrix.identity(2)
    return TorusCertificate(g, a_gens, 2, rho, alpha)
