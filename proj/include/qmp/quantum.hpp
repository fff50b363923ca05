#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmp/rng.hpp"

namespace qmp::quantum {

using cplx = std::complex<double>;

// Raised when two states do not share a Bob-side reduction: the
// "distinguishable" branch of the commitment dichotomy.
struct NotSameReduction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense complex square matrix, row major.
struct CMat {
    int dim = 0;
    std::vector<cplx> a;

    CMat() = default;
    explicit CMat(int d) : dim(d), a(static_cast<size_t>(d) * static_cast<size_t>(d)) {}
    static CMat identity(int d);

    cplx& at(int r, int c) { return a[static_cast<size_t>(r) * dim + c]; }
    const cplx& at(int r, int c) const { return a[static_cast<size_t>(r) * dim + c]; }

    CMat adjoint() const;
    CMat mul(const CMat& o) const;
    CMat sub(const CMat& o) const;
    cplx trace() const;
    double max_abs() const;
};

bool is_hermitian(const CMat& m, double tol);
bool is_unitary(const CMat& m, double tol);
// Hermitian + PSD + unit trace, each within tol.
bool is_density_matrix(const CMat& m, double tol);

struct EigenSystem {
    std::vector<double> values;  // ascending
    CMat vectors;                // columns are eigenvectors
};
// Cyclic Jacobi for Hermitian matrices; desk-scale dimensions.
EigenSystem eigen_hermitian(const CMat& m);

// Pure state over q qubits; the first `alice_qubits` belong to Alice. Qubit 0
// is the most significant index bit.
struct QuantumState {
    int qubits = 0;
    int alice_qubits = 0;
    std::vector<cplx> amp;

    QuantumState() = default;
    QuantumState(int q, int a) : qubits(q), alice_qubits(a), amp(1ull << q) {
        if (q < 0 || q > 12 || a < 0 || a > q)
            throw std::invalid_argument("state must have 0..12 qubits with a valid split");
    }

    int alice_dim() const { return 1 << alice_qubits; }
    int bob_dim() const { return 1 << (qubits - alice_qubits); }
    cplx& at(int ai, int bi) { return amp[static_cast<size_t>(ai) * bob_dim() + bi]; }
    const cplx& at(int ai, int bi) const { return amp[static_cast<size_t>(ai) * bob_dim() + bi]; }

    double norm() const;
    void normalize();
};

enum class Keep { Alice, Bob };
CMat partial_trace(const QuantumState& s, Keep keep);

// Half the absolute-eigenvalue sum of rho - sigma.
double trace_distance(const CMat& rho, const CMat& sigma);

double fidelity(const QuantumState& a, const QuantumState& b);  // |<a|b>|

struct SchmidtDecomposition {
    std::vector<double> coefficients;     // descending, squares sum to 1
    std::vector<std::vector<cplx>> alice;  // orthonormal
    std::vector<std::vector<cplx>> bob;    // orthonormal
};
SchmidtDecomposition schmidt_decompose(const QuantumState& s);

// Local unitary on Alice's side turning psi into phi, which exists whenever
// both reduce to the same state on Bob's side. Throws NotSameReduction
// otherwise.
CMat hjw_unitary(const QuantumState& psi, const QuantumState& phi);

QuantumState apply_alice_unitary(const CMat& u, const QuantumState& s);
void apply_single_qubit(QuantumState& s, int qubit, const CMat& gate);

// Computational-basis measurement of one qubit; collapses in place.
int measure_qubit(QuantumState& s, int qubit, BitSource& rng);

// --- toy commitment protocols and the attack demo ---

enum class ToyProtocol { Entangling, Revealing, MeasureThenFlip };
ToyProtocol toy_protocol_from_name(const std::string& name);
std::string toy_protocol_name(ToyProtocol p);

struct AttackReport {
    ToyProtocol protocol;
    double bob_trace_distance = 0;  // between the b=0 and b=1 reductions
    double flip_fidelity = 0;       // of the flipped b=0 state against b=1
    enum class Certified { Distinguishable, Flippable } certified = Certified::Distinguishable;
    bool not_same_reduction_raised = false;
    double measured_outcome_bias = 0;  // ancilla-outcome dependence on b
    int ancilla_outcome = -1;
};

// Runs the two-step argument on one built-in protocol: either Bob's
// reductions differ (measurable bit) or a local flip unitary is exhibited.
AttackReport mayers_attack_demo(ToyProtocol protocol, BitSource& rng);

std::string attack_report_text(const AttackReport& r);

// --- single-qubit conjugate-coding helpers ---

// |bit> in the computational (basis 0) or Hadamard (basis 1) basis.
QuantumState prepare_conjugate(int bit, int basis);
int measure_conjugate(QuantumState& s, int basis, BitSource& rng);

}  // namespace qmp::quantum
