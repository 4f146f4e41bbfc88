#ifndef NULLWAVE_NULLFORM_HPP
#define NULLWAVE_NULLFORM_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

// Constant-coefficient quadratic forms on gradients and the null condition.
//
// A form Q acts on gradients as Q(d phi, d psi) = sum Q_{mu nu} d_mu phi d_nu psi.
// Writing d_t phi = (p+q)/2 and d_x phi = (p-q)/2 with p = L phi, q = Lbar phi
// turns Q into its null-frame components
//
//   c_pp = (Q_tt + Q_tx + Q_xt + Q_xx)/4      coefficient of p p'
//   c_pq = (Q_tt - Q_tx + Q_xt - Q_xx)/4      coefficient of p q'
//   c_qp = (Q_tt + Q_tx - Q_xt - Q_xx)/4      coefficient of q p'
//   c_qq = (Q_tt - Q_tx - Q_xt + Q_xx)/4      coefficient of q q'
//
// Q is a null form exactly when c_pp = c_qq = 0, i.e. Q(xi,xi) = 0 on both
// null directions xi in {L, Lbar}.  Forms are kept unsymmetrized: Q_tx and
// Q_xt enter separately.

namespace nullwave {

struct QuadraticForm {
    double tt = 0.0, tx = 0.0, xt = 0.0, xx = 0.0;
};

struct NullFrameForm {
    double pp = 0.0, pq = 0.0, qp = 0.0, qq = 0.0;
};

inline NullFrameForm to_null_frame(const QuadraticForm& f) {
    return {0.25 * (f.tt + f.tx + f.xt + f.xx),
            0.25 * (f.tt - f.tx + f.xt - f.xx),
            0.25 * (f.tt + f.tx - f.xt - f.xx),
            0.25 * (f.tt - f.tx - f.xt + f.xx)};
}

inline QuadraticForm from_null_frame(const NullFrameForm& c) {
    return {c.pp + c.pq + c.qp + c.qq,
            c.pp - c.pq + c.qp - c.qq,
            c.pp + c.pq - c.qp - c.qq,
            c.pp - c.pq - c.qp + c.qq};
}

/// Null test.  tol = 0 demands exact cancellation; pass a relative tolerance
/// for coefficients that went through decimal text.
inline bool is_null(const QuadraticForm& f, double tol = 0.0) {
    NullFrameForm c = to_null_frame(f);
    double scale = std::fabs(f.tt) + std::fabs(f.tx) + std::fabs(f.xt) + std::fabs(f.xx);
    return std::fabs(c.pp) <= tol * scale && std::fabs(c.qq) <= tol * scale;
}

/// System of quadratic nonlinearities N_i = sum_{k,l} Q^{(i,k,l)}(d phi_k, d phi_l),
/// stored in the null frame.  Blocks entered as null-frame coefficients keep
/// pp = qq = 0 exactly, so purely right- or left-moving states annihilate the
/// nonlinearity at the bit level.  An empty block list is the linear system.
class NonlinearitySpec {
public:
    NonlinearitySpec() = default;
    explicit NonlinearitySpec(int n_fields) : n_(n_fields), blocks_(static_cast<size_t>(n_fields) * n_fields * n_fields) {
        if (n_fields < 1) throw std::invalid_argument("NonlinearitySpec: need at least one field");
    }

    static NonlinearitySpec linear(int n_fields = 1) { return NonlinearitySpec(n_fields); }

    int fields() const { return n_ == 0 ? 1 : n_; }
    bool trivial() const { return n_ == 0 || zero_; }

    /// alpha multiplies L phi_k Lbar phi_l, beta multiplies Lbar phi_k L phi_l.
    void add_null_term(int i, int k, int l, double alpha, double beta) {
        NullFrameForm& b = block(i, k, l);
        b.pq += alpha;
        b.qp += beta;
        zero_ = false;
    }

    void add_cartesian_term(int i, int k, int l, const QuadraticForm& f) {
        NullFrameForm c = to_null_frame(f);
        NullFrameForm& b = block(i, k, l);
        b.pp += c.pp;
        b.pq += c.pq;
        b.qp += c.qp;
        b.qq += c.qq;
        zero_ = false;
    }

    const NullFrameForm& block(int i, int k, int l) const {
        check(i, k, l);
        return blocks_[idx(i, k, l)];
    }

    bool all_null(double tol = 0.0) const {
        double scale = 0.0;
        for (const auto& b : blocks_)
            scale += std::fabs(b.pp) + std::fabs(b.pq) + std::fabs(b.qp) + std::fabs(b.qq);
        for (const auto& b : blocks_)
            if (std::fabs(b.pp) > tol * scale || std::fabs(b.qq) > tol * scale) return false;
        return true;
    }

    /// N_i at one point; p and q hold one value per field.
    void evaluate(const double* p, const double* q, double* out) const {
        int n = fields();
        for (int i = 0; i < n; ++i) out[i] = 0.0;
        if (trivial()) return;
        const NullFrameForm* b = blocks_.data();
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l, ++b)
                    acc += b->pp * p[k] * p[l] + b->pq * p[k] * q[l] +
                           b->qp * q[k] * p[l] + b->qq * q[k] * q[l];
            out[i] = acc;
        }
    }

    void evaluate_checked(const std::vector<double>& p, const std::vector<double>& q,
                          std::vector<double>& out) const {
        size_t n = static_cast<size_t>(fields());
        if (p.size() != n || q.size() != n)
            throw std::invalid_argument("NonlinearitySpec::evaluate: field count mismatch");
        out.resize(n);
        evaluate(p.data(), q.data(), out.data());
    }

private:
    size_t idx(int i, int k, int l) const {
        return (static_cast<size_t>(i) * n_ + k) * n_ + l;
    }
    void check(int i, int k, int l) const {
        if (i < 0 || i >= n_ || k < 0 || k >= n_ || l < 0 || l >= n_)
            throw std::out_of_range("NonlinearitySpec: block index out of range");
    }
    NullFrameForm& block(int i, int k, int l) {
        check(i, k, l);
        return blocks_[idx(i, k, l)];
    }

    int n_ = 0;
    bool zero_ = true;
    std::vector<NullFrameForm> blocks_;
};

} // namespace nullwave

#endif
