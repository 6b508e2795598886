#include "metastab/potential_theory.hpp"

#include <algorithm>
#include <cmath>

#include "metastab/errors.hpp"

namespace metastab {

Grid1D::Grid1D(double a_, double b_, int m_) : a(a_), b(b_), m(m_) {
    if (m < 3) throw InvalidArgument("grid needs at least 3 interior nodes");
    if (!(b > a)) throw InvalidArgument("grid interval must have b > a");
}

namespace {

enum class NodeRole { free, dirichlet };

struct Tridiagonal {
    std::vector<double> lower, diag, upper, rhs;
    explicit Tridiagonal(std::size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0) {}
};

std::vector<double> thomas_solve(Tridiagonal sys) {
    const std::size_t n = sys.diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (sys.diag[i - 1] == 0.0 || !std::isfinite(sys.diag[i - 1])) {
            throw SingularSystem("zero pivot in tridiagonal solve");
        }
        const double w = sys.lower[i] / sys.diag[i - 1];
        sys.diag[i] -= w * sys.upper[i - 1];
        sys.rhs[i] -= w * sys.rhs[i - 1];
    }
    if (sys.diag[n - 1] == 0.0 || !std::isfinite(sys.diag[n - 1])) {
        throw SingularSystem("zero pivot in tridiagonal solve");
    }
    std::vector<double> x(n);
    x[n - 1] = sys.rhs[n - 1] / sys.diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (sys.rhs[i] - sys.upper[i] * x[i + 1]) / sys.diag[i];
    return x;
}

/// Assembles eps e^{V/eps} (e^{-V/eps} u')' = f on free nodes, dividing each
/// row by the nodal weight so only local ratios e^{-(V_mid - V_i)/eps} appear.
/// Dirichlet nodes get u = value.
std::vector<double> solve_generator(const Grid1D& grid, const Potential& v, double epsilon,
                                    const std::vector<NodeRole>& roles, const std::vector<double>& dirichlet,
                                    double source) {
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
    if (v.dim() != 1) throw ShapeMismatch("1D solvers need a one-dimensional potential");
    const int n = grid.node_count();
    const double h = grid.step();
    if (std::none_of(roles.begin(), roles.end(), [](NodeRole r) { return r == NodeRole::dirichlet; })) {
        throw SingularSystem("no Dirichlet nodes; the reflecting problem is singular");
    }
    std::vector<double> vnode(static_cast<std::size_t>(n)), vmid(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n; ++i) vnode[i] = v.value(grid.node(i));
    for (int i = 0; i + 1 < n; ++i) vmid[i] = v.value(grid.node(i) + 0.5 * h);

    Tridiagonal sys(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (roles[i] == NodeRole::dirichlet) {
            sys.diag[i] = 1.0;
            sys.rhs[i] = dirichlet[i];
            continue;
        }
        // Boundary nodes carry half a cell and no outward flux.
        const double cell = (i == 0 || i == n - 1) ? 0.5 * h * h : h * h;
        const double right = i + 1 < n ? std::exp(-(vmid[i] - vnode[i]) / epsilon) : 0.0;
        const double left = i > 0 ? std::exp(-(vmid[i - 1] - vnode[i]) / epsilon) : 0.0;
        sys.lower[i] = epsilon * left / cell;
        sys.upper[i] = epsilon * right / cell;
        sys.diag[i] = -(sys.lower[i] + sys.upper[i]);
        sys.rhs[i] = source;
    }
    return thomas_solve(std::move(sys));
}

void require_on_grid(const Grid1D& grid, const Interval& set, const char* name) {
    for (int i = 0; i < grid.node_count(); ++i) {
        if (set.contains(grid.node(i), 1e-9 * grid.step())) return;
    }
    throw InvalidArgument(std::string(name) + " contains no grid node");
}

}  // namespace

double interpolate(const Grid1D& grid, const std::vector<double>& values, double x) {
    if (values.size() != static_cast<std::size_t>(grid.node_count())) throw ShapeMismatch("value count");
    if (x < grid.a || x > grid.b) throw OutOfRange("interpolation point outside the grid");
    const double s = (x - grid.a) / grid.step();
    const int i = std::min(static_cast<int>(std::floor(s)), grid.node_count() - 2);
    const double frac = s - i;
    return (1.0 - frac) * values[i] + frac * values[i + 1];
}

std::vector<double> solve_poisson(const Grid1D& grid, const Potential& v, double epsilon, const Interval& b_set) {
    require_on_grid(grid, b_set, "B");
    const int n = grid.node_count();
    std::vector<NodeRole> roles(static_cast<std::size_t>(n), NodeRole::free);
    for (int i = 0; i < n; ++i) {
        if (b_set.contains(grid.node(i), 1e-9 * grid.step())) roles[i] = NodeRole::dirichlet;
    }
    return solve_generator(grid, v, epsilon, roles, std::vector<double>(static_cast<std::size_t>(n), 0.0), -1.0);
}

CommittorSolution solve_committor(const Grid1D& grid, const Potential& v, double epsilon, const Interval& a_set,
                                  const Interval& b_set) {
    if (a_set.hi >= b_set.lo && b_set.hi >= a_set.lo) throw OverlappingSets("A and B intersect");
    require_on_grid(grid, a_set, "A");
    require_on_grid(grid, b_set, "B");
    const int n = grid.node_count();
    std::vector<NodeRole> roles(static_cast<std::size_t>(n), NodeRole::free);
    std::vector<double> bc(static_cast<std::size_t>(n), 0.0);
    const double tol = 1e-9 * grid.step();
    for (int i = 0; i < n; ++i) {
        const double x = grid.node(i);
        if (a_set.contains(x, tol)) {
            roles[i] = NodeRole::dirichlet;
            bc[i] = 1.0;
        } else if (b_set.contains(x, tol)) {
            roles[i] = NodeRole::dirichlet;
        }
    }
    CommittorSolution sol;
    sol.grid = grid;
    sol.a_set = a_set;
    sol.b_set = b_set;
    sol.values = solve_generator(grid, v, epsilon, roles, bc, 0.0);
    return sol;
}

double capacity_dirichlet(const Grid1D& grid, const Potential& v, double epsilon,
                          const CommittorSolution& committor, double v_ref) {
    if (committor.grid.a != grid.a || committor.grid.b != grid.b || committor.grid.m != grid.m) {
        throw ShapeMismatch("committor was solved on a different grid");
    }
    const double h = grid.step();
    double sum = 0.0;
    for (int i = 0; i + 1 < grid.node_count(); ++i) {
        const double dh = committor.values[i + 1] - committor.values[i];
        if (dh == 0.0) continue;
        const double weight = std::exp(-(v.value(grid.node(i) + 0.5 * h) - v_ref) / epsilon);
        sum += weight * dh * dh / h;
    }
    return epsilon * sum;
}

MagicIdentity magic_identity(const Grid1D& grid, const Potential& v, double epsilon, const Interval& a_set,
                             const Interval& b_set, double x_start, double v_ref) {
    const auto w = solve_poisson(grid, v, epsilon, b_set);
    const auto committor = solve_committor(grid, v, epsilon, a_set, b_set);
    MagicIdentity r;
    r.capacity = capacity_dirichlet(grid, v, epsilon, committor, v_ref);
    // Trapezoidal rule; h_AB vanishes on B so the integral over B^c is the full one.
    const double h = grid.step();
    const int n = grid.node_count();
    double integral = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = std::exp(-(v.value(grid.node(i)) - v_ref) / epsilon) * committor.values[i];
        integral += (i == 0 || i == n - 1) ? 0.5 * f : f;
    }
    r.integral = integral * h;
    r.lhs = interpolate(grid, w, x_start);
    r.rhs = r.integral / r.capacity;
    const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
    r.residual = scale < 1e-300 ? 0.0 : std::abs(r.lhs - r.rhs) / scale;
    return r;
}

double magic_identity_residual(const Grid1D& grid, const Potential& v, double epsilon, const Interval& a_set,
                               const Interval& b_set, double x_start) {
    return magic_identity(grid, v, epsilon, a_set, b_set, x_start).residual;
}

}  // namespace metastab
