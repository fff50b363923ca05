#include "qmp/quantum.hpp"

#include <algorithm>
#include <cmath>

namespace qmp::quantum {

CMat CMat::identity(int d) {
    CMat m(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
}

CMat CMat::adjoint() const {
    CMat m(dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m.at(c, r) = std::conj(at(r, c));
    return m;
}

CMat CMat::mul(const CMat& o) const {
    CMat m(dim);
    for (int r = 0; r < dim; ++r)
        for (int k = 0; k < dim; ++k) {
            const cplx v = at(r, k);
            if (v == cplx{}) continue;
            for (int c = 0; c < dim; ++c) m.at(r, c) += v * o.at(k, c);
        }
    return m;
}

CMat CMat::sub(const CMat& o) const {
    CMat m(dim);
    for (size_t i = 0; i < a.size(); ++i) m.a[i] = a[i] - o.a[i];
    return m;
}

cplx CMat::trace() const {
    cplx t = 0;
    for (int i = 0; i < dim; ++i) t += at(i, i);
    return t;
}

double CMat::max_abs() const {
    double m = 0;
    for (const cplx& v : a) m = std::max(m, std::abs(v));
    return m;
}

bool is_hermitian(const CMat& m, double tol) {
    for (int r = 0; r < m.dim; ++r)
        for (int c = 0; c < m.dim; ++c)
            if (std::abs(m.at(r, c) - std::conj(m.at(c, r))) > tol) return false;
    return true;
}

bool is_unitary(const CMat& m, double tol) {
    CMat prod = m.adjoint().mul(m);
    return prod.sub(CMat::identity(m.dim)).max_abs() <= tol;
}

bool is_density_matrix(const CMat& m, double tol) {
    if (!is_hermitian(m, tol)) return false;
    if (std::abs(m.trace() - cplx{1.0}) > tol) return false;
    for (double v : eigen_hermitian(m).values)
        if (v < -tol) return false;
    return true;
}

EigenSystem eigen_hermitian(const CMat& input) {
    const int n = input.dim;
    CMat a = input;
    // Symmetrize away representation noise.
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const cplx v = 0.5 * (a.at(r, c) + std::conj(a.at(c, r)));
            a.at(r, c) = v;
        }
    CMat v = CMat::identity(n);

    const double scale = std::max(a.max_abs(), 1e-300);
    for (int sweep = 0; sweep < 128; ++sweep) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a.at(p, q)));
        if (off <= 1e-15 * scale) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = a.at(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-18 * scale) continue;
                const cplx phase = apq / r;  // e^{i phi}
                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();
                const double theta = (app - aqq) / (2 * r);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // A := J^dag A J with J = [[c, -s e^{i phi}], [s e^{-i phi}, c]]
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const cplx aip = a.at(i, p), aiq = a.at(i, q);
                    a.at(i, p) = c * aip + s * std::conj(phase) * aiq;
                    a.at(i, q) = -s * phase * aip + c * aiq;
                    a.at(p, i) = std::conj(a.at(i, p));
                    a.at(q, i) = std::conj(a.at(i, q));
                }
                const double newp = app * c * c + 2 * r * c * s + aqq * s * s;
                const double newq = app * s * s - 2 * r * c * s + aqq * c * c;
                a.at(p, p) = newp;
                a.at(q, q) = newq;
                a.at(p, q) = 0;
                a.at(q, p) = 0;

                for (int i = 0; i < n; ++i) {
                    const cplx vip = v.at(i, p), viq = v.at(i, q);
                    v.at(i, p) = c * vip + s * std::conj(phase) * viq;
                    v.at(i, q) = -s * phase * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return a.at(x, x).real() < a.at(y, y).real(); });

    EigenSystem es;
    es.values.resize(static_cast<size_t>(n));
    es.vectors = CMat(n);
    for (int col = 0; col < n; ++col) {
        const int src = order[static_cast<size_t>(col)];
        es.values[static_cast<size_t>(col)] = a.at(src, src).real();
        for (int row = 0; row < n; ++row) es.vectors.at(row, col) = v.at(row, src);
    }
    return es;
}

double QuantumState::norm() const {
    double n2 = 0;
    for (const cplx& c : amp) n2 += std::norm(c);
    return std::sqrt(n2);
}

void QuantumState::normalize() {
    const double n = norm();
    if (n <= 0) throw std::invalid_argument("cannot normalize a zero state");
    for (cplx& c : amp) c /= n;
}

CMat partial_trace(const QuantumState& s, Keep keep) {
    const int da = s.alice_dim(), db = s.bob_dim();
    if (keep == Keep::Alice) {
        CMat rho(da);
        for (int i = 0; i < da; ++i)
            for (int j = 0; j < da; ++j) {
                cplx acc = 0;
                for (int b = 0; b < db; ++b) acc += s.at(i, b) * std::conj(s.at(j, b));
                rho.at(i, j) = acc;
            }
        return rho;
    }
    CMat rho(db);
    for (int i = 0; i < db; ++i)
        for (int j = 0; j < db; ++j) {
            cplx acc = 0;
            for (int a = 0; a < da; ++a) acc += s.at(a, i) * std::conj(s.at(a, j));
            rho.at(i, j) = acc;
        }
    return rho;
}

double trace_distance(const CMat& rho, const CMat& sigma) {
    if (rho.dim != sigma.dim) throw std::invalid_argument("trace distance needs equal dimensions");
    double d = 0;
    for (double v : eigen_hermitian(rho.sub(sigma)).values) d += std::abs(v);
    return d / 2;
}

double fidelity(const QuantumState& a, const QuantumState& b) {
    if (a.amp.size() != b.amp.size()) throw std::invalid_argument("state dimension mismatch");
    cplx ip = 0;
    for (size_t i = 0; i < a.amp.size(); ++i) ip += std::conj(b.amp[i]) * a.amp[i];
    return std::abs(ip);
}

namespace {

// Alice-side vectors paired with Bob's eigenbasis: psi = sum_k a_k (x) v_k.
std::vector<std::vector<cplx>> alice_components(const QuantumState& s, const CMat& bob_vectors,
                                                const std::vector<int>& kept) {
    const int da = s.alice_dim(), db = s.bob_dim();
    std::vector<std::vector<cplx>> out;
    for (int k : kept) {
        std::vector<cplx> a(static_cast<size_t>(da));
        for (int ai = 0; ai < da; ++ai) {
            cplx acc = 0;
            for (int b = 0; b < db; ++b) acc += s.at(ai, b) * std::conj(bob_vectors.at(b, k));
            a[static_cast<size_t>(ai)] = acc;
        }
        out.push_back(std::move(a));
    }
    return out;
}

cplx dot(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    cplx acc = 0;
    for (size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

double vec_norm(const std::vector<cplx>& x) { return std::sqrt(std::abs(dot(x, x))); }

// Extends an orthonormal set to a full basis via Gram-Schmidt over the
// standard basis.
std::vector<std::vector<cplx>> complete_basis(std::vector<std::vector<cplx>> vs, int dim) {
    for (int e = 0; e < dim && static_cast<int>(vs.size()) < dim; ++e) {
        std::vector<cplx> cand(static_cast<size_t>(dim));
        cand[static_cast<size_t>(e)] = 1.0;
        for (const auto& v : vs) {
            const cplx c = dot(v, cand);
            for (size_t i = 0; i < cand.size(); ++i) cand[i] -= c * v[i];
        }
        const double n = vec_norm(cand);
        if (n < 1e-9) continue;
        for (cplx& c : cand) c /= n;
        vs.push_back(std::move(cand));
    }
    if (static_cast<int>(vs.size()) != dim)
        throw std::logic_error("basis completion failed");
    return vs;
}

}  // namespace

SchmidtDecomposition schmidt_decompose(const QuantumState& s) {
    const auto rho_b = partial_trace(s, Keep::Bob);
    const auto es = eigen_hermitian(rho_b);

    std::vector<int> kept;
    for (int k = rho_b.dim - 1; k >= 0; --k)  // descending eigenvalues
        if (es.values[static_cast<size_t>(k)] > 1e-12) kept.push_back(k);

    SchmidtDecomposition out;
    auto alice = alice_components(s, es.vectors, kept);
    for (size_t i = 0; i < kept.size(); ++i) {
        const double lambda = std::sqrt(es.values[static_cast<size_t>(kept[i])]);
        out.coefficients.push_back(lambda);
        std::vector<cplx> u = alice[i];
        for (cplx& c : u) c /= lambda;
        out.alice.push_back(std::move(u));
        std::vector<cplx> v(static_cast<size_t>(rho_b.dim));
        for (int b = 0; b < rho_b.dim; ++b) v[static_cast<size_t>(b)] = es.vectors.at(b, kept[i]);
        out.bob.push_back(std::move(v));
    }
    return out;
}

CMat hjw_unitary(const QuantumState& psi, const QuantumState& phi) {
    if (psi.qubits != phi.qubits || psi.alice_qubits != phi.alice_qubits)
        throw std::invalid_argument("states must share the qubit layout");
    const auto rho_psi = partial_trace(psi, Keep::Bob);
    const auto rho_phi = partial_trace(phi, Keep::Bob);
    if (trace_distance(rho_psi, rho_phi) >= 1e-10)
        throw NotSameReduction("Bob-side reductions differ: the committed bit is measurable");

    const auto es = eigen_hermitian(rho_psi);
    std::vector<int> kept;
    for (int k = 0; k < rho_psi.dim; ++k)
        if (es.values[static_cast<size_t>(k)] > 1e-12) kept.push_back(k);

    auto a_psi = alice_components(psi, es.vectors, kept);
    auto a_phi = alice_components(phi, es.vectors, kept);
    for (auto& v : a_psi) {
        const double n = vec_norm(v);
        for (cplx& c : v) c /= n;
    }
    for (auto& v : a_phi) {
        const double n = vec_norm(v);
        for (cplx& c : v) c /= n;
    }

    const int da = psi.alice_dim();
    auto full_psi = complete_basis(std::move(a_psi), da);
    auto full_phi = complete_basis(std::move(a_phi), da);

    CMat u(da);
    for (int k = 0; k < da; ++k)  // sum of |phi_k><psi_k|
        for (int r = 0; r < da; ++r)
            for (int c = 0; c < da; ++c)
                u.at(r, c) += full_phi[static_cast<size_t>(k)][static_cast<size_t>(r)] *
                              std::conj(full_psi[static_cast<size_t>(k)][static_cast<size_t>(c)]);
    return u;
}

QuantumState apply_alice_unitary(const CMat& u, const QuantumState& s) {
    if (u.dim != s.alice_dim()) throw std::invalid_argument("unitary dimension mismatch");
    QuantumState out(s.qubits, s.alice_qubits);
    for (int b = 0; b < s.bob_dim(); ++b)
        for (int r = 0; r < u.dim; ++r) {
            cplx acc = 0;
            for (int c = 0; c < u.dim; ++c) acc += u.at(r, c) * s.at(c, b);
            out.at(r, b) = acc;
        }
    return out;
}

void apply_single_qubit(QuantumState& s, int qubit, const CMat& gate) {
    if (qubit < 0 || qubit >= s.qubits) throw std::invalid_argument("qubit index out of range");
    const int shift = s.qubits - 1 - qubit;
    const size_t stride = 1ull << shift;
    for (size_t base = 0; base < s.amp.size(); ++base) {
        if (base & stride) continue;
        const cplx a0 = s.amp[base], a1 = s.amp[base | stride];
        s.amp[base] = gate.at(0, 0) * a0 + gate.at(0, 1) * a1;
        s.amp[base | stride] = gate.at(1, 0) * a0 + gate.at(1, 1) * a1;
    }
}

int measure_qubit(QuantumState& s, int qubit, BitSource& rng) {
    const int shift = s.qubits - 1 - qubit;
    const size_t stride = 1ull << shift;
    double p1 = 0;
    for (size_t i = 0; i < s.amp.size(); ++i)
        if (i & stride) p1 += std::norm(s.amp[i]);
    const double u = static_cast<double>(rng.u64() >> 11) * 0x1p-53;
    const int outcome = u < p1 ? 1 : 0;
    for (size_t i = 0; i < s.amp.size(); ++i)
        if (((i & stride) != 0) != (outcome == 1)) s.amp[i] = 0;
    s.normalize();
    return outcome;
}

ToyProtocol toy_protocol_from_name(const std::string& name) {
    if (name == "entangling") return ToyProtocol::Entangling;
    if (name == "revealing") return ToyProtocol::Revealing;
    if (name == "measure-then-flip") return ToyProtocol::MeasureThenFlip;
    throw std::invalid_argument("unknown toy protocol: " + name);
}

std::string toy_protocol_name(ToyProtocol p) {
    switch (p) {
        case ToyProtocol::Entangling: return "entangling";
        case ToyProtocol::Revealing: return "revealing";
        case ToyProtocol::MeasureThenFlip: return "measure-then-flip";
    }
    return "?";
}

namespace {

// Bell pair between Alice's qubit and Bob's: b = 0 correlated, b = 1
// anticorrelated.
QuantumState entangling_state(int b) {
    QuantumState s(2, 1);
    const double r = 1.0 / std::sqrt(2.0);
    if (b == 0) {
        s.at(0, 0) = r;
        s.at(1, 1) = r;
    } else {
        s.at(0, 1) = r;
        s.at(1, 0) = r;
    }
    return s;
}

QuantumState revealing_state(int b) {
    QuantumState s(2, 1);
    s.at(b, b) = 1.0;
    return s;
}

// Bell pair plus a |+> ancilla on Alice's side (qubit layout: bell-half,
// ancilla | bob-half).
QuantumState measure_then_flip_state(int b) {
    QuantumState s(3, 2);
    const double h = 0.5;
    for (int anc = 0; anc <= 1; ++anc) {
        if (b == 0) {
            s.at(0 * 2 + anc, 0) = h;
            s.at(1 * 2 + anc, 1) = h;
        } else {
            s.at(0 * 2 + anc, 1) = h;
            s.at(1 * 2 + anc, 0) = h;
        }
    }
    return s;
}

double prob_of_one(const QuantumState& s, int qubit) {
    const size_t stride = 1ull << (s.qubits - 1 - qubit);
    double p1 = 0;
    for (size_t i = 0; i < s.amp.size(); ++i)
        if (i & stride) p1 += std::norm(s.amp[i]);
    return p1;
}

void collapse(QuantumState& s, int qubit, int outcome) {
    const size_t stride = 1ull << (s.qubits - 1 - qubit);
    for (size_t i = 0; i < s.amp.size(); ++i)
        if (((i & stride) != 0) != (outcome == 1)) s.amp[i] = 0;
    s.normalize();
}

}  // namespace

AttackReport mayers_attack_demo(ToyProtocol protocol, BitSource& rng) {
    AttackReport r;
    r.protocol = protocol;

    QuantumState psi0, psi1;
    switch (protocol) {
        case ToyProtocol::Entangling:
            psi0 = entangling_state(0);
            psi1 = entangling_state(1);
            break;
        case ToyProtocol::Revealing:
            psi0 = revealing_state(0);
            psi1 = revealing_state(1);
            break;
        case ToyProtocol::MeasureThenFlip: {
            psi0 = measure_then_flip_state(0);
            psi1 = measure_then_flip_state(1);
            // Alice measures her ancilla. The outcome law must not depend on
            // the committed bit, so the flip survives the measurement.
            const double p0 = prob_of_one(psi0, 1), p1 = prob_of_one(psi1, 1);
            r.measured_outcome_bias = std::abs(p0 - p1);
            const double u = static_cast<double>(rng.u64() >> 11) * 0x1p-53;
            r.ancilla_outcome = u < p0 ? 1 : 0;
            collapse(psi0, 1, r.ancilla_outcome);
            collapse(psi1, 1, r.ancilla_outcome);
            break;
        }
    }

    r.bob_trace_distance =
        trace_distance(partial_trace(psi0, Keep::Bob), partial_trace(psi1, Keep::Bob));
    if (r.bob_trace_distance < 1e-10) {
        const CMat u = hjw_unitary(psi0, psi1);
        r.flip_fidelity = fidelity(apply_alice_unitary(u, psi0), psi1);
        r.certified = AttackReport::Certified::Flippable;
    } else {
        try {
            (void)hjw_unitary(psi0, psi1);
        } catch (const NotSameReduction&) {
            r.not_same_reduction_raised = true;
        }
        r.certified = AttackReport::Certified::Distinguishable;
    }
    return r;
}

std::string attack_report_text(const AttackReport& r) {
    std::string s = "protocol " + toy_protocol_name(r.protocol) + "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "trace_distance %.12f\n", r.bob_trace_distance);
    s += buf;
    std::snprintf(buf, sizeof buf, "flip_fidelity %.12f\n", r.flip_fidelity);
    s += buf;
    s += "certified ";
    s += r.certified == AttackReport::Certified::Flippable ? "flippable" : "distinguishable";
    s += "\n";
    if (r.ancilla_outcome >= 0)
        s += "ancilla_outcome " + std::to_string(r.ancilla_outcome) + "\n";
    return s;
}

QuantumState prepare_conjugate(int bit, int basis) {
    QuantumState s(1, 0);
    if (basis == 0) {
        s.amp[static_cast<size_t>(bit)] = 1.0;
    } else {
        const double r = 1.0 / std::sqrt(2.0);
        s.amp[0] = r;
        s.amp[1] = bit ? -r : r;
    }
    return s;
}

int measure_conjugate(QuantumState& s, int basis, BitSource& rng) {
    if (basis == 1) {
        CMat h(2);
        const double r = 1.0 / std::sqrt(2.0);
        h.at(0, 0) = r;
        h.at(0, 1) = r;
        h.at(1, 0) = r;
        h.at(1, 1) = -r;
        apply_single_qubit(s, 0, h);
    }
    return measure_qubit(s, 0, rng);
}

}  // namespace qmp::quantum
