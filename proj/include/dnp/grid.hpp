#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dnp/types.hpp"

namespace dnp {

/// Uniform vertex grid on the box (0, L_x) [x (0, L_y)]. With n cells per axis
/// there are n - 1 interior nodes; boundary nodes carry the Dirichlet value 0
/// and are not stored.
class Grid {
public:
    static Grid line(double length, int cells);
    static Grid box(double length_x, double length_y, int cells_x, int cells_y);

    int dimension() const { return dim_; }
    int cells(int axis) const { return cells_[axis]; }
    double extent(int axis) const { return extent_[axis]; }
    double spacing(int axis) const { return extent_[axis] / cells_[axis]; }
    int interior(int axis) const { return cells_[axis] - 1; }
    int node_count() const;
    /// Quadrature weight of one node: the product of the spacings.
    double node_weight() const;
    double volume() const;

    /// Flat index of interior node (i, j), 1 <= i <= n_x - 1 (j ignored in 1-D).
    int index(int i, int j = 1) const;
    Vec2 node_position(int k) const;

    Grid refined() const;
    bool operator==(const Grid& other) const = default;

private:
    int dim_ = 1;
    std::array<int, 2> cells_{1, 1};
    std::array<double, 2> extent_{1.0, 1.0};
};

/// Node values on a grid; boundary trace is implicitly zero.
struct GridField {
    Grid grid;
    Eigen::VectorXd values;

    GridField() : grid(Grid::line(1.0, 2)), values(Eigen::VectorXd::Zero(1)) {}
    explicit GridField(const Grid& g) : grid(g), values(Eigen::VectorXd::Zero(g.node_count())) {}
    GridField(const Grid& g, Eigen::VectorXd v);

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int k) const { return values[k]; }
    double& operator[](int k) { return values[k]; }
};

GridField sample_field(const Grid& g, const std::function<double(const Vec2&)>& f);

enum class GradientMode {
    normal_only,     ///< each face sees only the normal difference
    with_tangential  ///< 2-D faces also carry the averaged tangential difference
};

/// Tangential reconstruction is used only for non-quadratic fluxes in 2-D.
GradientMode gradient_mode_for(const Grid& g, bool quadratic_flux);

/// One d-vector per interior face.
struct FaceField {
    Grid grid;
    GradientMode mode = GradientMode::normal_only;
    std::vector<Vec2> values;
};

/// Face layout and the discrete gradient matrix G (two rows per face: x and y
/// components). The divergence is -(1/h^d) G^T W, so summation by parts holds
/// exactly: sum_i (div q)_i v_i h^d = -sum_f w_f q_f . (G v)_f.
class FaceCalculus {
public:
    FaceCalculus(const Grid& g, GradientMode mode);

    const Grid& grid() const { return grid_; }
    GradientMode mode() const { return mode_; }
    int face_count() const { return static_cast<int>(positions_.size()); }
    const std::vector<Vec2>& positions() const { return positions_; }
    const std::vector<double>& weights() const { return weights_; }
    const Eigen::SparseMatrix<double>& matrix() const { return G_; }

    FaceField gradient(const GridField& u) const;
    /// Stacked gradient (x0, y0, x1, y1, ...) of raw node values.
    Eigen::VectorXd gradient_stacked(const Eigen::VectorXd& u) const;
    GridField divergence(const FaceField& q) const;

private:
    Grid grid_;
    GradientMode mode_;
    std::vector<Vec2> positions_;
    std::vector<double> weights_;
    Eigen::SparseMatrix<double> G_;
};

FaceField discrete_gradient(const GridField& u, GradientMode mode = GradientMode::normal_only);
GridField discrete_divergence(const FaceField& q);

enum class NormKind { lr, linf, w1p_seminorm };

struct NormSpec {
    NormKind kind = NormKind::lr;
    double exponent = 2.0;  ///< r for L^r, p for the W^{1,p} seminorm

    static NormSpec Lr(double r) { return {NormKind::lr, r}; }
    static NormSpec Linf() { return {NormKind::linf, 0.0}; }
    static NormSpec W1p(double p) { return {NormKind::w1p_seminorm, p}; }
};

double norm(const GridField& u, const NormSpec& which,
            GradientMode mode = GradientMode::normal_only);
double positive_part_integral(const GridField& u);
/// sum_i v_i h^d
double integral(const GridField& u);

/// One row per interior node: coordinates then value.
void write_field_csv(std::ostream& out, const GridField& u);

}  // namespace dnp
