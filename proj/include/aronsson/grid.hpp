#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aronsson/expr.hpp"

namespace aronsson {

struct GridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class NodeClass : std::uint8_t { exterior = 0, interior = 1, boundary = 2 };
enum class DomainKind { interval, rectangle, disc };

const char* to_string(NodeClass c);
const char* to_string(DomainKind k);

/// Geometry of the computational domain. The lattice is uniform with spacing
/// h over the (closed) bounding box; for kind==disc the box carries a
/// circular mask.
struct DomainSpec {
    DomainKind kind = DomainKind::interval;
    double x0 = -1.0, x1 = 1.0;
    double y0 = 0.0, y1 = 1.0;  // ignored for interval
    double h = 0.1;
    double cx = 0.0, cy = 0.0, radius = 0.0;  // disc only

    int dim() const { return kind == DomainKind::interval ? 1 : 2; }

    /// Throws GridError if extents are degenerate, h does not divide an axis
    /// extent to one part in 1e6, or a disc mask does not fit strictly inside
    /// its bounding rectangle.
    void validate() const;

    static DomainSpec interval(double x0, double x1, double h);
    static DomainSpec rectangle(double x0, double x1, double y0, double y1, double h);
    static DomainSpec disc(double cx, double cy, double radius, double margin, double h);
};

/// Discretized domain: lattice nodes classified interior/boundary/exterior.
/// Boundary nodes are the one-cell collar: masked nodes with an axis
/// neighbor that is off-lattice or outside the mask.
class Grid {
public:
    DomainSpec spec;
    int nx = 0, ny = 1;  // lattice extents (ny==1 in 1D)
    std::vector<NodeClass> cls;            // size nx*ny, row-major iy*nx+ix
    std::vector<std::uint32_t> interior;   // cell ids, ascending
    std::vector<std::uint32_t> boundary;   // cell ids, ascending

    int dim() const { return spec.dim(); }
    double h() const { return spec.h; }
    std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t cell(int ix, int iy) const { return static_cast<std::size_t>(iy) * nx + ix; }
    int ix_of(std::size_t c) const { return static_cast<int>(c % nx); }
    int iy_of(std::size_t c) const { return static_cast<int>(c / nx); }
    double x(int ix) const { return spec.x0 + ix * spec.h; }
    double y(int iy) const { return dim() == 1 ? 0.0 : spec.y0 + iy * spec.h; }
    NodeClass at(int ix, int iy) const {
        if (ix < 0 || ix >= nx || iy < 0 || iy >= ny) return NodeClass::exterior;
        return cls[cell(ix, iy)];
    }
    bool is_node(std::size_t c) const { return cls[c] != NodeClass::exterior; }
};

/// Builds the classified lattice for `spec`. Throws GridError on degenerate
/// specs.
std::shared_ptr<const Grid> build_grid(const DomainSpec& spec);

/// All grid nodes (interior or boundary) within Euclidean distance eps of
/// `center`, including the node itself. Throws GridError if eps < h.
std::vector<std::uint32_t> ball_stencil(const Grid& grid, std::size_t center, double eps);

/// Per-|dy| halfwidths of the lattice ball of radius eps, shared by every
/// node. halfwidth[dy + k] is the max |dx| with dx^2+dy^2 <= (eps/h)^2.
struct StencilShape {
    int k = 0;
    std::vector<int> halfwidth;  // size 2k+1
    static StencilShape make(double eps, double h);
};

/// Boundary data g: source text, cached values at grid.boundary nodes (same
/// order), and the sampled Lipschitz constant over boundary node pairs.
struct BoundaryData {
    std::string expr_src;
    std::vector<double> values;
    double lipschitz_estimate = 0.0;

    double max_value() const;
    double min_value() const;
};

/// Samples g at every boundary node and estimates its Lipschitz constant.
/// Evaluation failures name the offending node.
BoundaryData sample_boundary(const Expression& g, const Grid& grid);
BoundaryData sample_boundary(const std::function<double(double, double)>& g, const Grid& grid,
                             const std::string& src = "<function>");

/// Scalar field on the grid: one value per interior+boundary node, stored
/// densely over the lattice (exterior slots are zero and never read).
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(std::shared_ptr<const Grid> grid, double fill = 0.0)
        : grid_(std::move(grid)), v_(grid_->cells(), fill) {}

    const Grid& grid() const { return *grid_; }
    const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
    double operator[](std::size_t c) const { return v_[c]; }
    double& operator[](std::size_t c) { return v_[c]; }
    std::span<const double> values() const { return v_; }
    std::span<double> values() { return v_; }

    /// Writes g at the boundary nodes.
    void impose_boundary(const BoundaryData& g);
    /// True iff every interior+boundary value is finite.
    bool all_finite() const;

    double max_interior() const;
    double min_interior() const;
    /// max - min over interior+boundary nodes.
    double range() const;

private:
    std::shared_ptr<const Grid> grid_;
    std::vector<double> v_;
};

/// Dirichlet problem data: domain, boundary payoff g, running constant tau.
struct Problem {
    std::shared_ptr<const Grid> grid;
    BoundaryData g;
    double tau = 1.0;
};

/// sup |a - b| over interior nodes (grids must match).
double sup_diff_interior(const GridFunction& a, const GridFunction& b);

}  // namespace aronsson
