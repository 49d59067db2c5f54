#include "flr/types.hpp"

namespace flr {

Grid::Grid(Eigen::VectorXd pts) : points(std::move(pts)) {
    const int m = static_cast<int>(points.size());
    if (m < 2) throw dimension_error("Grid needs at least 2 points");
    for (int p = 0; p < m; ++p) {
        const double t = points[p];
        if (!(t >= 0.0 && t <= 1.0)) throw dimension_error("grid points must lie in [0,1]");
        if (p > 0 && !(points[p - 1] < t)) throw dimension_error("grid points must be strictly increasing");
    }
}

Grid Grid::midpoints(int m) {
    if (m < 2) throw dimension_error("Grid needs at least 2 points");
    Eigen::VectorXd pts(m);
    for (int p = 0; p < m; ++p) pts[p] = (p + 0.5) / m;
    return Grid(std::move(pts));
}

Grid Grid::endpoints(int m) {
    if (m < 2) throw dimension_error("Grid needs at least 2 points");
    Eigen::VectorXd pts(m);
    for (int p = 0; p < m; ++p) pts[p] = static_cast<double>(p) / (m - 1);
    return Grid(std::move(pts));
}

FunctionalDataset::FunctionalDataset(Grid g, Eigen::VectorXd y_, Eigen::MatrixXd X_)
    : grid(std::move(g)), y(std::move(y_)), X(std::move(X_)) {
    if (X.rows() != y.size()) throw dimension_error("y length must match number of curves");
    if (X.cols() != grid.m()) throw dimension_error("curve length must match grid size");
    if (X.rows() < 2) throw data_error("need at least 2 observations");
    if (!y.allFinite() || !X.allFinite()) throw numeric_error("non-finite values in dataset");
}

}  // namespace flr
