#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace flr {

struct dimension_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct rank_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct selection_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct fold_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct run_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Equispaced (by default) sampling design on [0,1] with quadrature weight 1/m.
struct Grid {
    Eigen::VectorXd points;  // strictly increasing, in [0,1]

    Grid() = default;
    explicit Grid(Eigen::VectorXd pts);

    int m() const { return static_cast<int>(points.size()); }
    double weight() const { return 1.0 / static_cast<double>(points.size()); }

    // t_p = (p - 0.5)/m; the Riemann weight is exactly 1/m.
    static Grid midpoints(int m);
    // t_p = (p - 1)/(m - 1), includes both endpoints.
    static Grid endpoints(int m);

    bool operator==(const Grid& other) const {
        return points.size() == other.points.size() && points == other.points;
    }
};

/// A function sampled on a Grid.
struct Curve {
    Eigen::VectorXd values;

    Curve() = default;
    explicit Curve(Eigen::VectorXd v) : values(std::move(v)) {}
    static Curve zero(int m) { return Curve(Eigen::VectorXd::Zero(m)); }

    int size() const { return static_cast<int>(values.size()); }
};

/// n response scalars paired with n curves on a shared grid (rows of X).
struct FunctionalDataset {
    Grid grid;
    Eigen::VectorXd y;
    Eigen::MatrixXd X;  // n x m, row i = curve i

    FunctionalDataset() = default;
    FunctionalDataset(Grid g, Eigen::VectorXd y_, Eigen::MatrixXd X_);

    int n() const { return static_cast<int>(X.rows()); }
    Curve curve(int i) const { return Curve(X.row(i).transpose()); }
};

}  // namespace flr
