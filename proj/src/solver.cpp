#include "shg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace shg {

namespace {

// PML stretch factors at a physical point, relative to the interior box.
cplx stretch(double d, const PmlParams& pml) {
    if (d <= 0.0) return {1.0, 0.0};
    const double r = d / pml.width;
    return {1.0, -pml.strength * r * r};
}

cplx harmonic_mean(cplx a, cplx b) { return 2.0 * a * b / (a + b); }

}  // namespace

DiscreteOperator assemble(const MediumRealization& medium, const RealField& eta1,
                          Wavenumber wn, const PmlParams& pml) {
    const Grid2D& g = medium.grid;
    if (eta1.grid.nx != g.nx || eta1.grid.ny != g.ny)
        throw std::invalid_argument("assemble: eta1 grid does not match the medium grid");
    const double h = g.h;
    const double lambda = TWO_PI / wn.k;
    if (h > lambda / (10.0 * wn.harmonic) + 1e-12)
        throw std::invalid_argument("assemble: grid step under-resolves harmonic " +
                                    std::to_string(wn.harmonic) + " (need h <= lambda/(10 j))");
    if (pml.width <= 0.0 || pml.strength < 0.0)
        throw std::invalid_argument("assemble: bad PML parameters");

    DiscreteOperator op;
    op.wn = wn;
    op.pml = pml;
    op.pad.interior = g;
    op.pad.pml_nodes = int(std::lround(pml.width / h));
    const int np = op.pad.pml_nodes;
    op.pad.padded = Grid2D{g.x0 - np * h, g.y0 - np * h, h, g.nx + 2 * np, g.ny + 2 * np};

    const Grid2D& pg = op.pad.padded;
    const double jk = wn.jk();
    const double jk2 = jk * jk;

    // Node tables of ex, ey and the linear potential (1 in the PML).
    std::vector<cplx> ex(pg.size()), ey(pg.size());
    std::vector<double> pot(pg.size(), 1.0);
    for (int j = 0; j < pg.ny; ++j) {
        const double y = pg.y(j);
        const double dy = std::max({0.0, g.y0 - y, y - g.ymax()});
        for (int i = 0; i < pg.nx; ++i) {
            const double x = pg.x(i);
            const double dx = std::max({0.0, g.x0 - x, x - g.xmax()});
            const std::size_t n = pg.idx(i, j);
            ex[n] = stretch(dx, pml);
            ey[n] = stretch(dy, pml);
        }
    }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            pot[op.pad.padded_index(i, j)] =
                1.0 + 4.0 * PI * (medium.eta[g.idx(i, j)] + eta1.at(i, j));

    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(pg.size() * 5);
    const double ih2 = 1.0 / (h * h);
    for (int j = 0; j < pg.ny; ++j) {
        for (int i = 0; i < pg.nx; ++i) {
            const std::size_t n = pg.idx(i, j);
            const bool boundary = (i == 0 || j == 0 || i == pg.nx - 1 || j == pg.ny - 1);
            if (boundary) {
                trip.emplace_back(int(n), int(n), cplx{1.0, 0.0});
                continue;
            }
            const cplx ax = ey[n] / ex[n];
            const cplx ay = ex[n] / ey[n];
            const cplx aw = harmonic_mean(ax, ey[n - 1] / ex[n - 1]) * ih2;
            const cplx ae = harmonic_mean(ax, ey[n + 1] / ex[n + 1]) * ih2;
            const cplx as = harmonic_mean(ay, ex[n - pg.nx] / ey[n - pg.nx]) * ih2;
            const cplx an = harmonic_mean(ay, ex[n + pg.nx] / ey[n + pg.nx]) * ih2;
            const cplx diag = -(aw + ae + as + an) + jk2 * ex[n] * ey[n] * pot[n];
            if (!std::isfinite(diag.real()) || !std::isfinite(diag.imag()))
                throw std::runtime_error("assemble: non-finite stencil coefficient");
            trip.emplace_back(int(n), int(n - 1), aw);
            trip.emplace_back(int(n), int(n + 1), ae);
            trip.emplace_back(int(n), int(n - pg.nx), as);
            trip.emplace_back(int(n), int(n + pg.nx), an);
            trip.emplace_back(int(n), int(n), diag);
        }
    }
    op.A.resize(int(pg.size()), int(pg.size()));
    op.A.setFromTriplets(trip.begin(), trip.end());
    op.A.makeCompressed();
    return op;
}

LinearSolveHandle::LinearSolveHandle(DiscreteOperator op) : op_(std::move(op)) {
    lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>>>();
    lu_->analyzePattern(op_.A);
    lu_->factorize(op_.A);
    if (lu_->info() != Eigen::Success)
        throw std::runtime_error("factorize: sparse LU breakdown (singular or out of memory)");
}

LinearSolveHandle::~LinearSolveHandle() = default;
LinearSolveHandle::LinearSolveHandle(LinearSolveHandle&&) noexcept = default;

Eigen::VectorXcd LinearSolveHandle::solve(const Eigen::VectorXcd& b) const {
    Eigen::VectorXcd x;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        x = lu_->solve(b);
    }
    const double bn = b.lpNorm<Eigen::Infinity>();
    if (bn > 0.0) {
        const double rn = (op_.A * x - b).lpNorm<Eigen::Infinity>();
        if (!(rn <= 1e-10 * bn))
            throw std::runtime_error("solve: residual " + std::to_string(rn / bn) +
                                     " exceeds the 1e-10 contract");
    }
    return x;
}

FieldSolution fixed_point_shg(const LinearSolveHandle& hk, const LinearSolveHandle& h2k,
                              const MediumRealization& medium, const RealField& eta1,
                              const RealField& eta2, const ComplexField& u_inc,
                              double tol, int max_iter) {
    if (tol <= 0.0) throw std::invalid_argument("fixed_point_shg: tol must be > 0");
    const PaddedGrid& pad = hk.op().pad;
    const Grid2D& pg = pad.padded;
    const Grid2D& ig = pad.interior;
    if (h2k.op().pad.padded.nx != pg.nx || h2k.op().pad.padded.ny != pg.ny)
        throw std::invalid_argument("fixed_point_shg: operators do not share a grid");
    if (u_inc.grid.nx != pg.nx || u_inc.grid.ny != pg.ny)
        throw std::invalid_argument("fixed_point_shg: incident field must live on the padded grid");
    if (eta2.grid.nx != ig.nx || eta2.grid.ny != ig.ny ||
        medium.grid.nx != ig.nx || medium.grid.ny != ig.ny)
        throw std::invalid_argument("fixed_point_shg: field grids do not match the interior");

    const std::size_t N = pg.size();
    const double k = hk.op().wn.k;
    const double c_u = -4.0 * PI * k * k;
    const double c_v = -16.0 * PI * k * k;

    // Padded coefficient tables; susceptibilities vanish inside the PML.
    Eigen::VectorXd lin(N), quad(N);
    lin.setZero();
    quad.setZero();
    for (int j = 0; j < ig.ny; ++j) {
        for (int i = 0; i < ig.nx; ++i) {
            const std::size_t n = pad.padded_index(i, j);
            lin[n] = medium.eta[ig.idx(i, j)] + eta1.at(i, j);
            quad[n] = eta2.at(i, j);
        }
    }
    Eigen::Map<const Eigen::VectorXcd> ui(u_inc.v.data(), long(N));

    const Eigen::VectorXcd rhs_lin = c_u * lin.cast<cplx>().cwiseProduct(ui);

    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(long(N));
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(long(N));

    auto rel_change = [](const Eigen::VectorXcd& now, const Eigen::VectorXcd& before) {
        const double scale = now.lpNorm<Eigen::Infinity>();
        const double diff = (now - before).lpNorm<Eigen::Infinity>();
        return scale > 0.0 ? diff / scale : diff;
    };

    FieldSolution sol;
    double prev_change = std::numeric_limits<double>::infinity();
    int growth_streak = 0;
    Eigen::VectorXcd rhs_u, rhs_v;
    for (int it = 1; it <= max_iter; ++it) {
        rhs_u = rhs_lin +
                (2.0 * c_u) * quad.cast<cplx>().cwiseProduct(v).cwiseProduct((u + ui).conjugate());
        const Eigen::VectorXcd u_next = hk.solve(rhs_u);
        rhs_v = c_v * quad.cast<cplx>().cwiseProduct((u_next + ui).cwiseProduct(u_next + ui));
        const Eigen::VectorXcd v_next = h2k.solve(rhs_v);

        const double change = std::max(rel_change(u_next, u), rel_change(v_next, v));
        u = u_next;
        v = v_next;
        sol.iterations = it;
        if (change < tol) {
            sol.converged = true;
            break;
        }
        if (change > prev_change) {
            if (++growth_streak >= 3) {
                sol.diverged = true;
                break;
            }
        } else {
            growth_streak = 0;
        }
        prev_change = change;
    }

    // Residual of the coupled discrete equations with the final iterates.
    rhs_u = rhs_lin + (2.0 * c_u) * quad.cast<cplx>().cwiseProduct(v).cwiseProduct((u + ui).conjugate());
    rhs_v = c_v * quad.cast<cplx>().cwiseProduct((u + ui).cwiseProduct(u + ui));
    auto rel_residual = [](const Eigen::SparseMatrix<cplx>& A, const Eigen::VectorXcd& x,
                           const Eigen::VectorXcd& b) {
        const double bn = b.lpNorm<Eigen::Infinity>();
        const double rn = (A * x - b).lpNorm<Eigen::Infinity>();
        return bn > 0.0 ? rn / bn : rn;
    };
    sol.final_residual = std::max(rel_residual(hk.op().A, u, rhs_u),
                                  rel_residual(h2k.op().A, v, rhs_v));

    sol.u = ComplexField(ig);
    sol.v = ComplexField(ig);
    for (int j = 0; j < ig.ny; ++j) {
        for (int i = 0; i < ig.nx; ++i) {
            const std::size_t n = pad.padded_index(i, j);
            sol.u.at(i, j) = u[long(n)];
            sol.v.at(i, j) = v[long(n)];
        }
    }
    return sol;
}

double pml_quality(const LinearSolveHandle& handle) {
    const PaddedGrid& pad = handle.op().pad;
    const Grid2D& ig = pad.interior;
    const Grid2D& pg = pad.padded;
    const Wavenumber wn = handle.op().wn;
    const double lambda = TWO_PI / wn.k;

    const int ci = ig.nx / 2;
    const int cj = ig.ny / 2;
    const Point2 center = ig.node(ci, cj);

    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(long(pg.size()));
    b[long(pad.padded_index(ci, cj))] = cplx{1.0, 0.0};
    const Eigen::VectorXcd u = handle.solve(b);

    // Collect the numerical and analytic Green's functions on the annulus.
    std::vector<cplx> num, ref;
    for (int j = 0; j < ig.ny; ++j) {
        for (int i = 0; i < ig.nx; ++i) {
            const double r = norm(ig.node(i, j) - center);
            if (r < 2.0 * lambda || r > 5.0 * lambda) continue;
            num.push_back(u[long(pad.padded_index(i, j))]);
            ref.push_back(g0_2d(ig.node(i, j), center, wn));
        }
    }
    if (num.empty()) throw std::runtime_error("pml_quality: domain too small for the 2-5 lambda annulus");

    // One fitted complex scale absorbs the source normalization.
    cplx cross{0.0, 0.0};
    double refsq = 0.0;
    for (std::size_t n = 0; n < num.size(); ++n) {
        cross += num[n] * std::conj(ref[n]);
        refsq += std::norm(ref[n]);
    }
    const cplx scale = cross / refsq;

    double worst = 0.0;
    for (std::size_t n = 0; n < num.size(); ++n) {
        const double dev = std::abs(num[n] - scale * ref[n]) / std::abs(scale * ref[n]);
        worst = std::max(worst, dev);
    }
    return worst;
}

}  // namespace shg
