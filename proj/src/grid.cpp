#include "dnp/grid.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "dnp/errors.hpp"
#include "dnp/numerics.hpp"

namespace dnp {

namespace {

void check_axis(double length, int cells, const char* axis) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        std::ostringstream msg;
        msg << "domain extent along " << axis << " must be positive (got " << length << ")";
        throw InvalidParameter(msg.str());
    }
    if (cells < 2) {
        std::ostringstream msg;
        msg << "need at least 2 cells along " << axis << " for an interior node (got " << cells << ")";
        throw InvalidParameter(msg.str());
    }
}

}  // namespace

Grid Grid::line(double length, int cells) {
    check_axis(length, cells, "x");
    Grid g;
    g.dim_ = 1;
    g.cells_ = {cells, 1};
    g.extent_ = {length, 1.0};
    return g;
}

Grid Grid::box(double length_x, double length_y, int cells_x, int cells_y) {
    check_axis(length_x, cells_x, "x");
    check_axis(length_y, cells_y, "y");
    Grid g;
    g.dim_ = 2;
    g.cells_ = {cells_x, cells_y};
    g.extent_ = {length_x, length_y};
    return g;
}

int Grid::node_count() const {
    return dim_ == 1 ? interior(0) : interior(0) * interior(1);
}

double Grid::node_weight() const {
    return dim_ == 1 ? spacing(0) : spacing(0) * spacing(1);
}

double Grid::volume() const { return dim_ == 1 ? extent_[0] : extent_[0] * extent_[1]; }

int Grid::index(int i, int j) const {
    if (dim_ == 1) return i - 1;
    return (j - 1) * interior(0) + (i - 1);
}

Vec2 Grid::node_position(int k) const {
    if (dim_ == 1) return {(k + 1) * spacing(0), 0.0};
    const int i = k % interior(0) + 1;
    const int j = k / interior(0) + 1;
    return {i * spacing(0), j * spacing(1)};
}

Grid Grid::refined() const {
    return dim_ == 1 ? line(extent_[0], 2 * cells_[0])
                     : box(extent_[0], extent_[1], 2 * cells_[0], 2 * cells_[1]);
}

GridField::GridField(const Grid& g, Eigen::VectorXd v) : grid(g), values(std::move(v)) {
    if (values.size() != g.node_count()) throw InvalidParameter("field size does not match grid");
}

GridField sample_field(const Grid& g, const std::function<double(const Vec2&)>& f) {
    GridField u(g);
    for (int k = 0; k < u.size(); ++k) u[k] = f(g.node_position(k));
    return u;
}

GradientMode gradient_mode_for(const Grid& g, bool quadratic_flux) {
    return (g.dimension() == 2 && !quadratic_flux) ? GradientMode::with_tangential
                                                   : GradientMode::normal_only;
}

FaceCalculus::FaceCalculus(const Grid& g, GradientMode mode) : grid_(g), mode_(mode) {
    if (g.dimension() == 1) mode_ = GradientMode::normal_only;
    const double hw = g.node_weight();
    std::vector<Eigen::Triplet<double>> trip;

    if (g.dimension() == 1) {
        const int n = g.cells(0);
        const double h = g.spacing(0);
        for (int f = 0; f < n; ++f) {
            positions_.push_back({(f + 0.5) * h, 0.0});
            weights_.push_back(hw);
            // face f joins nodes f and f + 1; nodes 0 and n are boundary
            if (f + 1 <= n - 1) trip.emplace_back(2 * f, g.index(f + 1), 1.0 / h);
            if (f >= 1) trip.emplace_back(2 * f, g.index(f), -1.0 / h);
        }
    } else {
        const int nx = g.cells(0), ny = g.cells(1);
        const double hx = g.spacing(0), hy = g.spacing(1);
        const bool tangential = mode_ == GradientMode::with_tangential;
        const double w = tangential ? 0.5 * hw : hw;
        auto interior = [&](int i, int j) { return i >= 1 && i <= nx - 1 && j >= 1 && j <= ny - 1; };
        auto add = [&](int row, int i, int j, double v) {
            if (interior(i, j)) trip.emplace_back(row, g.index(i, j), v);
        };
        int f = 0;
        for (int j = 1; j <= ny - 1; ++j) {
            for (int i = 0; i < nx; ++i, ++f) {
                positions_.push_back({(i + 0.5) * hx, j * hy});
                weights_.push_back(w);
                add(2 * f, i + 1, j, 1.0 / hx);
                add(2 * f, i, j, -1.0 / hx);
                if (tangential) {
                    const double t = 1.0 / (4.0 * hy);
                    add(2 * f + 1, i, j + 1, t);
                    add(2 * f + 1, i, j - 1, -t);
                    add(2 * f + 1, i + 1, j + 1, t);
                    add(2 * f + 1, i + 1, j - 1, -t);
                }
            }
        }
        for (int j = 0; j < ny; ++j) {
            for (int i = 1; i <= nx - 1; ++i, ++f) {
                positions_.push_back({i * hx, (j + 0.5) * hy});
                weights_.push_back(w);
                add(2 * f + 1, i, j + 1, 1.0 / hy);
                add(2 * f + 1, i, j, -1.0 / hy);
                if (tangential) {
                    const double t = 1.0 / (4.0 * hx);
                    add(2 * f, i + 1, j, t);
                    add(2 * f, i - 1, j, -t);
                    add(2 * f, i + 1, j + 1, t);
                    add(2 * f, i - 1, j + 1, -t);
                }
            }
        }
    }
    G_.resize(2 * face_count(), g.node_count());
    G_.setFromTriplets(trip.begin(), trip.end());
    G_.makeCompressed();
}

Eigen::VectorXd FaceCalculus::gradient_stacked(const Eigen::VectorXd& u) const { return G_ * u; }

FaceField FaceCalculus::gradient(const GridField& u) const {
    if (!(u.grid == grid_)) throw InvalidParameter("field lives on a different grid");
    const Eigen::VectorXd z = G_ * u.values;
    FaceField q{grid_, mode_, std::vector<Vec2>(face_count())};
    for (int f = 0; f < face_count(); ++f) q.values[f] = {z[2 * f], z[2 * f + 1]};
    return q;
}

GridField FaceCalculus::divergence(const FaceField& q) const {
    if (static_cast<int>(q.values.size()) != face_count())
        throw InvalidParameter("face field size does not match the face layout");
    Eigen::VectorXd flat(2 * face_count());
    for (int f = 0; f < face_count(); ++f) {
        flat[2 * f] = weights_[f] * q.values[f][0];
        flat[2 * f + 1] = weights_[f] * q.values[f][1];
    }
    Eigen::VectorXd d = -(G_.transpose() * flat) / grid_.node_weight();
    return GridField(grid_, std::move(d));
}

FaceField discrete_gradient(const GridField& u, GradientMode mode) {
    return FaceCalculus(u.grid, mode).gradient(u);
}

GridField discrete_divergence(const FaceField& q) {
    return FaceCalculus(q.grid, q.mode).divergence(q);
}

double norm(const GridField& u, const NormSpec& which, GradientMode mode) {
    const double hw = u.grid.node_weight();
    switch (which.kind) {
        case NormKind::linf: return u.size() ? u.values.cwiseAbs().maxCoeff() : 0.0;
        case NormKind::lr: {
            const double r = which.exponent;
            if (!(r >= 1.0)) throw InvalidParameter("L^r norm needs r >= 1");
            double s = 0.0;
            for (int k = 0; k < u.size(); ++k) s += std::pow(std::abs(u[k]), r);
            return std::pow(s * hw, 1.0 / r);
        }
        case NormKind::w1p_seminorm: {
            const double p = which.exponent;
            if (!(p > 1.0)) throw InvalidParameter("W^{1,p} seminorm needs p > 1");
            const FaceCalculus calc(u.grid, mode);
            const FaceField q = calc.gradient(u);
            double s = 0.0;
            for (int f = 0; f < calc.face_count(); ++f)
                s += calc.weights()[f] * std::pow(dnp::norm(q.values[f]), p);
            return std::pow(s, 1.0 / p);
        }
    }
    return 0.0;
}

double positive_part_integral(const GridField& u) {
    double s = 0.0;
    for (int k = 0; k < u.size(); ++k) s += std::max(u[k], 0.0);
    return s * u.grid.node_weight();
}

double integral(const GridField& u) {
    double s = 0.0;
    for (int k = 0; k < u.size(); ++k) s += u[k];
    return s * u.grid.node_weight();
}

void write_field_csv(std::ostream& out, const GridField& u) {
    const bool two_d = u.grid.dimension() == 2;
    out << (two_d ? "x,y,value\n" : "x,value\n");
    for (int k = 0; k < u.size(); ++k) {
        const Vec2 x = u.grid.node_position(k);
        out << format_real(x[0]) << ',';
        if (two_d) out << format_real(x[1]) << ',';
        out << format_real(u[k]) << '\n';
    }
}

}  // namespace dnp
