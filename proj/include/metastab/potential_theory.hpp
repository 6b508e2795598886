#pragma once

#include <vector>

#include "metastab/potentials.hpp"

namespace metastab {

/// Uniform grid on [a, b] with m interior nodes and the two endpoints:
/// x_i = a + i h, i = 0..m+1, h = (b - a) / (m + 1).
struct Grid1D {
    double a = 0.0;
    double b = 1.0;
    int m = 99;

    Grid1D() = default;
    Grid1D(double a_, double b_, int m_);

    double step() const { return (b - a) / (m + 1); }
    int node_count() const { return m + 2; }
    double node(int i) const { return a + i * step(); }
};

/// Closed interval [lo, hi]; a single point when lo == hi.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x, double tol = 1e-12) const { return x >= lo - tol && x <= hi + tol; }
};

/// Values of the committor h_AB = P^x(tau_A < tau_B) on every grid node.
struct CommittorSolution {
    Grid1D grid;
    std::vector<double> values;
    Interval a_set;
    Interval b_set;
};

/// Piecewise-linear interpolation of nodal values.
double interpolate(const Grid1D& grid, const std::vector<double>& values, double x);

/// Mean hitting time w(x) = E^x[tau_B] of the generator eps w'' - V' w',
/// discretized in flux form with zero-flux conditions at grid endpoints
/// outside B. Returns one value per node.
std::vector<double> solve_poisson(const Grid1D& grid, const Potential& v, double epsilon, const Interval& b_set);

/// Discrete harmonic interpolation between 1 on A and 0 on B.
CommittorSolution solve_committor(const Grid1D& grid, const Potential& v, double epsilon,
                                  const Interval& a_set, const Interval& b_set);

/// eps * int e^{-(V - v_ref)/eps} |h'|^2 dx, midpoint rule on each cell.
/// The capacity of the unshifted potential is obtained with v_ref = 0.
double capacity_dirichlet(const Grid1D& grid, const Potential& v, double epsilon,
                          const CommittorSolution& committor, double v_ref = 0.0);

/// Both sides of the identity relating the mean hitting time under the
/// equilibrium measure to the weighted committor integral over capacity.
/// The left side is approximated by w(x_start).
struct MagicIdentity {
    double lhs = 0.0;        ///< w(x_start)
    double rhs = 0.0;        ///< integral / capacity
    double capacity = 0.0;   ///< at v_ref
    double integral = 0.0;   ///< int_{B^c} e^{-(V - v_ref)/eps} h_AB dx at v_ref
    double residual = 0.0;   ///< |lhs - rhs| / max(|lhs|, |rhs|)
};

MagicIdentity magic_identity(const Grid1D& grid, const Potential& v, double epsilon, const Interval& a_set,
                             const Interval& b_set, double x_start, double v_ref = 0.0);

double magic_identity_residual(const Grid1D& grid, const Potential& v, double epsilon, const Interval& a_set,
                               const Interval& b_set, double x_start);

}  // namespace metastab
