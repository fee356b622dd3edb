"""Entangled compound states built from amplitude operators.

An amplitude operator kappa maps the input space G into noise (x) output
F (x) K.  Its columns over a basis of G generate a compound state on
G (x) K whose marginals are kappa^dagger kappa and the noise-traced output.
Three nested classes of compound states are handled: general (q), block
diagonal (d), and block diagonal with commuting blocks (c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .capacity import CapacityReport, OptimizerConfig, StateFamily, optimize_over_states
from .channels import (
    MutualEntropyReport,
    QuantumChannel,
    compound_state,
)
from .entropy import EntropyValue, _relative_entropy_nats, von_neumann_entropy
from .errors import (
    BasisNotOrthonormal,
    DimensionMismatch,
    InvalidAmplitude,
    MarginalMismatch,
)
from .operators import (
    DensityOperator,
    SchattenDecomposition,
    canonical_eigenbasis,
    partial_trace,
    schatten_decompose,
    spectral_decompose,
    _fix_phase,
)

NORMALIZATION_TOL = 1e-9
ORTHONORMALITY_TOL = 1e-9
BLOCK_DIAGONAL_TOL = 1e-9
COMMUTATION_TOL = 1e-8
MARGINAL_TOL = 1e-8


class AmplitudeOperator:
    """A normalized linear map from G into F (x) K (noise-major ordering)."""

    __slots__ = ("matrix", "noise_dim", "input_dim", "output_dim")

    def __init__(self, matrix, noise_dim: int = 1):
        arr = np.asarray(matrix, dtype=complex)
        if arr.ndim != 2:
            raise DimensionMismatch("amplitude operator must be a matrix")
        if noise_dim < 1 or arr.shape[0] % noise_dim != 0:
            raise DimensionMismatch(
                f"rows {arr.shape[0]} do not factor over noise dimension {noise_dim}"
            )
        norm = float(np.real(np.trace(arr.conj().T @ arr)))
        dev = abs(norm - 1.0)
        if dev > NORMALIZATION_TOL:
            raise InvalidAmplitude(
                f"tr(kappa^dagger kappa) deviates from 1 by {dev:.3e}", deviation=dev
            )
        arr = arr / math.sqrt(norm)
        arr.flags.writeable = False
        self.matrix = arr
        self.noise_dim = noise_dim
        self.input_dim = arr.shape[1]
        self.output_dim = arr.shape[0] // noise_dim

    @classmethod
    def standard(cls, sigma: DensityOperator) -> "AmplitudeOperator":
        """The square-root amplitude of a state (noise-free, G = K)."""
        w, v = sigma.eigenvalues, sigma.eigenvectors
        root = (v * np.sqrt(w)) @ v.conj().T
        return cls(root, noise_dim=1)

    @classmethod
    def from_pure_bipartite(cls, psi, input_dim: int, output_dim: int) -> "AmplitudeOperator":
        """Recover the amplitude of a pure compound state by reshaping."""
        vec = np.asarray(psi, dtype=complex).reshape(-1)
        if vec.size != input_dim * output_dim:
            raise DimensionMismatch(
                f"vector of length {vec.size} does not factor as "
                f"{input_dim}x{output_dim}"
            )
        return cls(vec.reshape(input_dim, output_dim).T, noise_dim=1)

    def column(self, vector: np.ndarray) -> np.ndarray:
        """kappa applied to one input vector, as an F x K block matrix."""
        return (self.matrix @ vector).reshape(self.noise_dim, self.output_dim)

    def input_state(self) -> DensityOperator:
        return DensityOperator(self.matrix.conj().T @ self.matrix)

    def output_state(self) -> DensityOperator:
        kk = self.matrix @ self.matrix.conj().T
        return DensityOperator(
            partial_trace(kk, (self.noise_dim, self.output_dim), 1)
        )


def marginals(kappa: AmplitudeOperator) -> tuple[DensityOperator, DensityOperator]:
    """The induced input state kappa^dagger kappa and noise-traced output."""
    return kappa.input_state(), kappa.output_state()


def observable_action(kappa: AmplitudeOperator, observable: np.ndarray) -> np.ndarray:
    """The dual (Heisenberg) action kappa^dagger (I_F (x) A) kappa on G."""
    a = np.asarray(observable, dtype=complex)
    lifted = np.kron(np.eye(kappa.noise_dim), a)
    return kappa.matrix.conj().T @ lifted @ kappa.matrix


def state_action(
    kappa: AmplitudeOperator, operator: np.ndarray, basis: np.ndarray | None = None
) -> np.ndarray:
    """The predual (Schroedinger) action sum_nm <n|B|m> tr_F kappa_n kappa_m^dagger."""
    b = np.asarray(operator, dtype=complex)
    basis = np.eye(kappa.input_dim, dtype=complex) if basis is None else basis
    out = np.zeros((kappa.output_dim, kappa.output_dim), dtype=complex)
    cols = [kappa.column(basis[:, n]) for n in range(basis.shape[1])]
    for n in range(len(cols)):
        for m in range(len(cols)):
            coeff = basis[:, n].conj() @ b @ basis[:, m]
            if abs(coeff) > 1e-300:
                out += coeff * _trace_noise(cols[n], cols[m])
    return out


def _trace_noise(col_n: np.ndarray, col_m: np.ndarray) -> np.ndarray:
    """tr_F of kappa_n kappa_m^dagger for two F x K column blocks."""
    # sum over the noise index of the K x K outer products
    return np.einsum("fi,fj->ij", col_n, col_m.conj())


@dataclass(frozen=True)
class EntangledCompoundState:
    """A compound state over G (x) K with the basis that structures it."""

    theta: DensityOperator
    cls: str  # 'q' | 'd' | 'c' as declared by the constructor
    basis: np.ndarray  # orthonormal columns spanning G
    input_dim: int
    output_dim: int
    weakly_orthogonal: bool | None = None

    def input_marginal(self) -> np.ndarray:
        return partial_trace(self.theta.matrix, (self.input_dim, self.output_dim), 2)

    def output_marginal(self) -> np.ndarray:
        return partial_trace(self.theta.matrix, (self.input_dim, self.output_dim), 1)

    def blocks(self) -> np.ndarray:
        """(g, g, k, k) array of K-blocks in the declared basis."""
        g, k = self.input_dim, self.output_dim
        lifted = np.kron(self.basis, np.eye(k, dtype=complex))
        rotated = lifted.conj().T @ self.theta.matrix @ lifted
        return rotated.reshape(g, k, g, k).transpose(0, 2, 1, 3)


def _check_orthonormal(basis: np.ndarray, dim: int) -> None:
    if basis.shape != (dim, dim):
        raise BasisNotOrthonormal(
            f"basis must supply {dim} vectors of dimension {dim}, got {basis.shape}"
        )
    dev = float(np.max(np.abs(basis.conj().T @ basis - np.eye(dim))))
    if dev > ORTHONORMALITY_TOL:
        raise BasisNotOrthonormal(
            f"basis deviates from orthonormality by {dev:.3e}", deviation=dev
        )


def _complete_basis(vectors: list[np.ndarray], dim: int) -> np.ndarray:
    """Extend orthonormal vectors to a full basis by Gram-Schmidt."""
    chosen = [np.asarray(v, dtype=complex) for v in vectors]
    for i in range(dim):
        if len(chosen) == dim:
            break
        cand = np.zeros(dim, dtype=complex)
        cand[i] = 1.0
        for u in chosen:
            cand -= u * (u.conj() @ cand)
        norm = np.linalg.norm(cand)
        if norm > 1e-6:
            chosen.append(_fix_phase(cand / norm))
    return np.column_stack(chosen)


def q_compound(
    kappa: AmplitudeOperator, basis: np.ndarray | None = None
) -> EntangledCompoundState:
    """The compound state generated by an amplitude operator.

    The basis defaults to the eigenbasis of kappa^dagger kappa, in which the
    weak orthogonality condition holds and the marginals are exactly the
    states induced by kappa.
    """
    g, k = kappa.input_dim, kappa.output_dim
    if basis is None:
        _, vecs = canonical_eigenbasis(kappa.matrix.conj().T @ kappa.matrix)
        basis = np.column_stack(vecs)
    else:
        basis = np.asarray(basis, dtype=complex)
    _check_orthonormal(basis, g)
    cols = [kappa.column(basis[:, n]) for n in range(g)]
    theta = np.zeros((g * k, g * k), dtype=complex)
    for n in range(g):
        for m in range(g):
            block = _trace_noise(cols[n], cols[m])
            theta += np.kron(np.outer(basis[:, n], basis[:, m].conj()), block)
    gram = basis.conj().T @ (kappa.matrix.conj().T @ kappa.matrix) @ basis
    off = gram - np.diag(np.diag(gram))
    weak = float(np.max(np.abs(off))) <= ORTHONORMALITY_TOL if g > 1 else True
    return EntangledCompoundState(
        theta=DensityOperator(theta),
        cls="q",
        basis=basis,
        input_dim=g,
        output_dim=k,
        weakly_orthogonal=weak,
    )


def d_compound(
    rho: DensityOperator,
    channel: QuantumChannel,
    decomposition: SchattenDecomposition | None = None,
) -> EntangledCompoundState:
    """The block-diagonal compound state of a state/channel pair.

    This is the same state the channel module's compound construction yields,
    viewed on G (x) K with the decomposition's eigenvectors as the basis.
    """
    comp = compound_state(rho, channel, decomposition)
    basis = _complete_basis(list(comp.decomposition.vectors), rho.dim)
    return EntangledCompoundState(
        theta=comp.theta,
        cls="d",
        basis=basis,
        input_dim=rho.dim,
        output_dim=channel.output_dim,
        weakly_orthogonal=True,
    )


def classify(state: EntangledCompoundState) -> str:
    """The finest class whose invariant holds: 'c' within 'd' within 'q'."""
    blocks = state.blocks()
    g = state.input_dim
    off = 0.0
    for n in range(g):
        for m in range(g):
            if n != m:
                off = max(off, float(np.max(np.abs(blocks[n, m]))))
    if off > BLOCK_DIAGONAL_TOL:
        return "q"
    diag = [blocks[n, n] for n in range(g)]
    for i in range(g):
        for j in range(i + 1, g):
            comm = diag[i] @ diag[j] - diag[j] @ diag[i]
            if float(np.max(np.abs(comm))) > COMMUTATION_TOL:
                return "d"
    return "c"


def entangled_mutual_entropy(
    state: EntangledCompoundState,
    rho: DensityOperator,
    sigma: DensityOperator,
    base: str = "e",
    marginal_tol: float = MARGINAL_TOL,
) -> EntropyValue:
    """Relative entropy of the compound state against the product of marginals."""
    dev_in = float(np.max(np.abs(state.input_marginal() - rho.matrix)))
    dev_out = float(np.max(np.abs(state.output_marginal() - sigma.matrix)))
    if dev_in > marginal_tol or dev_out > marginal_tol:
        raise MarginalMismatch(
            f"compound state marginals deviate from (rho, sigma) by "
            f"({dev_in:.3e}, {dev_out:.3e})",
            deviation=max(dev_in, dev_out),
        )
    product = DensityOperator(np.kron(rho.matrix, sigma.matrix))
    return EntropyValue.from_nats(
        _relative_entropy_nats(state.theta, product), base
    )


def _mutual_nats(state: EntangledCompoundState) -> float:
    rho = DensityOperator(state.input_marginal())
    sigma = DensityOperator(state.output_marginal())
    product = DensityOperator(np.kron(rho.matrix, sigma.matrix))
    return _relative_entropy_nats(state.theta, product)


@dataclass(frozen=True)
class QEntropySearch:
    """Search family for the entanglement-generated entropy of a state.

    Candidates are the standard square-root amplitude plus seeded random
    amplitudes renormalized to the target output marginal, over noise
    dimensions up to dim K.
    """

    n_samples: int = 16
    noise_dims: tuple[int, ...] = ()
    seed: int = 0


@dataclass(frozen=True)
class QEntropyReport:
    entropy: EntropyValue
    status: str  # 'exact' | 'lower_bound'
    samples: int
    argmax: dict


def _inv_sqrt_psd(matrix: np.ndarray, floor: float = 1e-12) -> np.ndarray | None:
    w, v = np.linalg.eigh((matrix + matrix.conj().T) / 2.0)
    if float(w.min()) < floor:
        return None
    return (v / np.sqrt(w)) @ v.conj().T


def q_entropy(
    sigma: DensityOperator,
    search: QEntropySearch = QEntropySearch(),
    base: str = "e",
) -> QEntropyReport:
    """Best mutual entropy over entanglements with output marginal ``sigma``.

    A pure ``sigma`` admits only product compounds, so the value is exactly
    zero; otherwise the best candidate found is reported as a lower bound
    (the square-root amplitude attains twice the von Neumann entropy).
    """
    k = sigma.dim
    pure = float(sigma.eigenvalues.max()) >= 1.0 - 1e-10
    candidates: list[tuple[float, dict]] = []

    std = q_compound(AmplitudeOperator.standard(sigma))
    candidates.append((_mutual_nats(std), {"kind": "standard"}))

    noise_dims = search.noise_dims or (1, k)
    rng = np.random.default_rng(search.seed)
    root = (sigma.eigenvectors * np.sqrt(sigma.eigenvalues)) @ sigma.eigenvectors.conj().T
    for f in noise_dims:
        for s in range(search.n_samples):
            a = rng.standard_normal((f * k, k)) + 1j * rng.standard_normal((f * k, k))
            b = partial_trace(a @ a.conj().T, (f, k), 1)
            inv_root = _inv_sqrt_psd(b, floor=1e-8)
            if inv_root is None:
                continue
            x = root @ inv_root
            kappa = AmplitudeOperator(np.kron(np.eye(f), x) @ a, noise_dim=f)
            comp = q_compound(kappa)
            candidates.append(
                (_mutual_nats(comp), {"kind": "dilated", "noise_dim": f, "sample": s})
            )

    best, arg = max(candidates, key=lambda t: t[0])
    status = "exact" if pure else "lower_bound"
    return QEntropyReport(
        EntropyValue.from_nats(best, base), status, len(candidates), arg
    )


def q_conditional(
    state: EntangledCompoundState,
    rho: DensityOperator,
    sigma: DensityOperator,
    search: QEntropySearch = QEntropySearch(),
    base: str = "e",
) -> EntropyValue:
    """Entanglement-generated conditional entropy H_sigma - I(theta)."""
    h = q_entropy(sigma, search).entropy.nats
    i = entangled_mutual_entropy(state, rho, sigma).nats
    return EntropyValue.from_nats(h - i, base)


def disentanglement_degree(
    state: EntangledCompoundState, sigma: DensityOperator, base: str = "e"
) -> EntropyValue:
    """S(sigma) minus the compound state's mutual entropy (signed)."""
    dev = float(np.max(np.abs(state.output_marginal() - sigma.matrix)))
    if dev > MARGINAL_TOL:
        raise MarginalMismatch(
            f"output marginal deviates from sigma by {dev:.3e}", deviation=dev
        )
    s = von_neumann_entropy(sigma).value
    return EntropyValue.signed_from_nats(s - _mutual_nats(state), base)


def chaos_degree(
    sigma: DensityOperator,
    search: QEntropySearch = QEntropySearch(),
    base: str = "e",
) -> EntropyValue:
    """The minimum disentanglement degree over the search family."""
    s = von_neumann_entropy(sigma).value
    h = q_entropy(sigma, search).entropy.nats
    return EntropyValue.signed_from_nats(s - h, base)


@dataclass(frozen=True)
class EntangledSearch:
    """Candidate generation controls for class-constrained mutual entropies."""

    n_samples: int = 16
    seed: int = 0


def _channel_d_candidates(
    rho: DensityOperator, channel: QuantumChannel, search: EntangledSearch
):
    decomps = [schatten_decompose(rho)]
    degenerate = any(r > 1 for r in spectral_decompose(rho).ranks())
    if degenerate:
        for s in range(search.n_samples):
            decomps.append(
                schatten_decompose(rho, "seeded-random-unitary", seed=search.seed + s)
            )
    return decomps, degenerate


def channel_entangled_mutual(
    rho: DensityOperator,
    channel: QuantumChannel,
    cls: str,
    search: EntangledSearch = EntangledSearch(),
    base: str = "e",
) -> MutualEntropyReport:
    """Class-constrained mutual entropy of a state through a channel.

    Class 'd' searches block-diagonal compounds over rank-one decompositions;
    'c' keeps only decompositions whose output blocks commute (falling back
    to the uncorrelated product compound when none qualify); 'q' adds the
    channel-lifted purification and seeded phase twists of it, all sharing
    the marginals (rho, channel(rho)).
    """
    if cls not in ("q", "d", "c"):
        raise ValueError(f"class must be 'q', 'd', or 'c', got {cls!r}")
    out_avg = channel.apply(rho)
    product = DensityOperator(np.kron(rho.matrix, out_avg.matrix))
    decomps, degenerate = _channel_d_candidates(rho, channel, search)

    def theta_value(dec) -> float:
        comp = compound_state(rho, channel, dec)
        return _relative_entropy_nats(comp.theta, product)

    samples = 0
    best = -math.inf
    best_dec = None

    if cls in ("d", "q"):
        for dec in decomps:
            val = theta_value(dec)
            samples += 1
            if val > best:
                best, best_dec = val, dec

    if cls == "c":
        passed = False
        for dec in decomps:
            blocks = [
                channel.apply_matrix(np.outer(v, v.conj())) for v in dec.vectors
            ]
            commuting = True
            for i in range(len(blocks)):
                for j in range(i + 1, len(blocks)):
                    comm = blocks[i] @ blocks[j] - blocks[j] @ blocks[i]
                    if float(np.max(np.abs(comm))) > COMMUTATION_TOL:
                        commuting = False
                        break
                if not commuting:
                    break
            samples += 1
            if not commuting:
                continue
            passed = True
            val = theta_value(dec)
            if val > best:
                best, best_dec = val, dec
        if not passed:
            # the uncorrelated compound is always a valid commuting candidate
            best = 0.0
        status = "exact" if (not degenerate and passed) else "lower_bound"
        return MutualEntropyReport(
            EntropyValue.from_nats(best, base), status, samples, best_dec
        )

    if cls == "q":
        canonical = decomps[0]
        rng = np.random.default_rng(search.seed)
        phase_sets = [np.zeros(len(canonical.weights))]
        for _ in range(search.n_samples):
            phase_sets.append(rng.uniform(0.0, 2.0 * np.pi, len(canonical.weights)))
        for phases in phase_sets:
            theta = np.zeros((rho.dim * channel.output_dim,) * 2, dtype=complex)
            for n, (wn, vn) in enumerate(zip(canonical.weights, canonical.vectors)):
                for m, (wm, vm) in enumerate(zip(canonical.weights, canonical.vectors)):
                    coeff = math.sqrt(wn * wm) * np.exp(1j * (phases[n] - phases[m]))
                    theta += coeff * np.kron(
                        np.outer(vn, vm.conj()),
                        channel.apply_matrix(np.outer(vn, vm.conj())),
                    )
            val = _relative_entropy_nats(DensityOperator(theta), product)
            samples += 1
            if val > best:
                best, best_dec = val, None

    status = "exact" if (cls == "d" and not degenerate) else "lower_bound"
    return MutualEntropyReport(
        EntropyValue.from_nats(best, base), status, samples, best_dec
    )


def channel_entangled_capacity(
    channel: QuantumChannel,
    cls: str,
    family: StateFamily,
    search: EntangledSearch = EntangledSearch(),
    config: OptimizerConfig = OptimizerConfig(),
    base: str = "e",
) -> CapacityReport:
    """sup of the class-constrained mutual entropy over a state family."""
    statuses: list[str] = []

    def objective(rho: DensityOperator) -> float:
        report = channel_entangled_mutual(rho, channel, cls, search)
        statuses.append(report.status)
        return report.entropy.nats

    if family.kind == "all":
        val, state, evals = optimize_over_states(objective, family.dim, config)
        finite = False
    else:
        candidates = family.candidates()
        val, state = -math.inf, None
        for cand in candidates:
            v = objective(cand)
            if v > val:
                val, state = v, cand
        evals = len(candidates)
        finite = family.kind == "explicit"
    exact = finite and all(s == "exact" for s in statuses)
    return CapacityReport(
        value=EntropyValue.from_nats(val, base),
        argmax={"state": state.matrix.tolist() if state is not None else None},
        status="exact" if exact else "lower_bound",
        evaluations=evals,
    )
