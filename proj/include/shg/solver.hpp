#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <mutex>

#include "shg/geometry.hpp"
#include "shg/medium.hpp"
#include "shg/waves.hpp"

namespace shg {

/// Perfectly matched layer: quadratic absorption ramp 1 - i*a0*(d/width)^2.
struct PmlParams {
    double width = 1.5;     // layer thickness, units of lambda
    double strength = 1.79; // a0
};

/// Interior grid plus the PML-padded grid it embeds into.
struct PaddedGrid {
    Grid2D interior;
    Grid2D padded;
    int pml_nodes = 0;

    std::size_t padded_index(int ii, int ij) const {
        return padded.idx(ii + pml_nodes, ij + pml_nodes);
    }
};

/// Assembled 5-point discretization of the PML Helmholtz operator
///   dx((ey/ex) dx .) + dy((ex/ey) dy .) + (jk)^2 ex ey (1 + 4pi eta + 4pi eta1)
/// over the padded grid, with homogeneous Dirichlet rows on the outer ring.
struct DiscreteOperator {
    Eigen::SparseMatrix<cplx> A;
    PaddedGrid pad;
    Wavenumber wn;
    PmlParams pml;
};

DiscreteOperator assemble(const MediumRealization& medium, const RealField& eta1,
                          Wavenumber wn, const PmlParams& pml);

/// Factorized operator supporting repeated right-hand sides. Each solve is
/// checked against the 1e-10 relative-residual contract. solve() may be
/// called from several threads (serialized internally).
class LinearSolveHandle {
public:
    explicit LinearSolveHandle(DiscreteOperator op);
    ~LinearSolveHandle();
    LinearSolveHandle(LinearSolveHandle&&) noexcept;
    LinearSolveHandle& operator=(LinearSolveHandle&&) noexcept = delete;

    Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;
    const DiscreteOperator& op() const { return op_; }

private:
    DiscreteOperator op_;
    std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>>> lu_;
    mutable std::mutex mutex_;
};

inline LinearSolveHandle factorize(DiscreteOperator op) { return LinearSolveHandle(std::move(op)); }

/// Result of the coupled fixed-point iteration; fields live on the interior
/// grid (PML stripped). u is the scattered fundamental (u1 - incident),
/// v the total second harmonic.
struct FieldSolution {
    ComplexField u;
    ComplexField v;
    int iterations = 0;
    double final_residual = 0.0;
    bool converged = false;
    bool diverged = false;
};

/// Fixed-point iteration
///   u <- -4 pi k^2 Hk^-1 [ 2 eta2 v (u + ui)^* + (eta + eta1) ui ]
///   v <- -16 pi k^2 H2k^-1 [ eta2 (u + ui)^2 ]
/// starting from u = v = 0, stopping when both relative sup-norm changes
/// drop below tol. u_inc must be sampled on the padded grid of the operators.
FieldSolution fixed_point_shg(const LinearSolveHandle& hk, const LinearSolveHandle& h2k,
                              const MediumRealization& medium, const RealField& eta1,
                              const RealField& eta2, const ComplexField& u_inc,
                              double tol = 1e-8, int max_iter = 50);

/// Homogeneous-medium point-source test of the PML: max relative deviation
/// from g0_2d over the annulus 2..5 wavelengths, after fitting one complex
/// scale factor.
double pml_quality(const LinearSolveHandle& homogeneous_handle);

}  // namespace shg
