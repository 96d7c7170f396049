#ifndef GENSUB_PARTITIONS_HPP
#define GENSUB_PARTITIONS_HPP

#include <string>
#include <variant>
#include <vector>

#include "gensub/matrix_core.hpp"

namespace gensub {

/// Reduced description D_ij = omega(v_j* v_i) of a global state.
///
/// `unity` records whether the generating partition sums to the identity
/// (m = 1).  Only then is tr D = 1 guaranteed; otherwise D keeps its physical
/// normalization, e.g. the mean particle number for annihilator partitions.
struct CorrelationMatrix {
    Matrix D;
    bool unity = true;

    Index size() const noexcept { return D.rows(); }

    /// Throws ValidationError if D is not Hermitian PSD (and trace one when `unity`).
    void validate(double tol = kDefaultTol) const;
};

/// Ordered, linearly independent family (v_1, ..., v_d) of operators on C^n.
///
/// The products v_i* v_j are cached at construction; every map the
/// partition induces (Phi, its pull-back, the mass m) is a contraction
/// against them.
class Partition {
public:
    /// Rejects non-square or mismatched elements and families whose
    /// Hilbert-Schmidt Gram matrix has rank < d at relative tolerance
    /// `independence_tol`.  A tolerance of zero skips the rank check, which
    /// composed families such as {P_k P_l} of commuting projectors need.
    explicit Partition(std::vector<Matrix> elements, std::string label = {},
                       double independence_tol = 1e-8);

    Index size() const noexcept { return static_cast<Index>(elements_.size()); }
    Index dim() const noexcept { return dim_; }
    const std::string& label() const noexcept { return label_; }
    const std::vector<Matrix>& elements() const noexcept { return elements_; }
    const Matrix& operator[](Index i) const { return elements_[static_cast<std::size_t>(i)]; }

    /// v_i* v_j.
    const Matrix& product(Index i, Index j) const
    {
        return products_[static_cast<std::size_t>(i * size() + j)];
    }

private:
    std::vector<Matrix> elements_;
    std::vector<Matrix> products_;
    std::string label_;
    Index dim_ = 0;
};

/// Discrete probability measure on an abstract phase space together with the
/// partition-function values v(x) in C^d at every point.
struct PhaseSpaceModel {
    std::vector<std::string> points;
    std::vector<double> weights;
    std::vector<Vector> values;

    Index size() const noexcept { return values.empty() ? 0 : values.front().size(); }
    void validate(double tol = kDefaultTol) const;
};

/// m = sum_i v_i* v_i.
Matrix partition_mass(const Partition& v);

bool is_partition_of_unity(const Partition& v, double tol = kDefaultTol);

/// Phi(A) = sum_ij A_ij v_i* v_j.  Completely positive; unital iff m = 1.
Matrix phi_apply(const Partition& v, const Matrix& a);

/// Phi*(omega): D_ij = tr(omega v_j* v_i).  Dual to phi_apply:
/// tr(D A) = tr(omega Phi(A)).
CorrelationMatrix pullback(const Partition& v, const Matrix& omega, double tol = kDefaultTol);

/// Composed partition {v_a w_k}; the pair (a, k) sits at flat index a * |W| + k.
/// With `require_independent = false` degenerate products are kept.
Partition compose(const Partition& v, const Partition& w, bool require_independent = true);

/// D = sum_x mu(x) |v(x)><v(x)|.
CorrelationMatrix classical_correlation(const PhaseSpaceModel& model, double tol = kDefaultTol);

/// v_j = |phi><j| (x) 1_E on C^dimS (x) C^dimE; pulls back to the partial trace over E.
struct OpenSystem {
    Index dimS = 2;
    Index dimE = 1;
    Vector phi;
};

/// (P_j (x) 1_E) for mutually orthogonal projectors summing to the identity.
struct CoarseGrain {
    std::vector<Matrix> projectors;
    Index dimE = 1;
};

using StandardPartitionKind = std::variant<OpenSystem, CoarseGrain>;

Partition standard_partition(const StandardPartitionKind& kind, double tol = kDefaultTol);

/// Mean-field reduction Phi(A) = (1/N) sum_i A_i on (C^d)^{(x)N}.
Matrix meanfield_phi(const Matrix& a, int n_particles);

/// Dual of meanfield_phi: the average one-particle marginal of omega.
Matrix meanfield_pullback(const Matrix& omega, Index one_particle_dim, int n_particles,
                          double tol = kDefaultTol);

} // namespace gensub

#endif // GENSUB_PARTITIONS_HPP
