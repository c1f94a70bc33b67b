#include "aronsson/grid.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace aronsson {

const char* to_string(NodeClass c) {
    switch (c) {
        case NodeClass::exterior: return "exterior";
        case NodeClass::interior: return "interior";
        case NodeClass::boundary: return "boundary";
    }
    return "?";
}

const char* to_string(DomainKind k) {
    switch (k) {
        case DomainKind::interval: return "interval";
        case DomainKind::rectangle: return "rectangle";
        case DomainKind::disc: return "disc";
    }
    return "?";
}

namespace {

// Number of cells along an axis; throws unless h divides the extent to one
// part in 1e6.
int axis_cells(double lo, double hi, double h, const char* axis) {
    double n = (hi - lo) / h;
    double rn = std::round(n);
    if (rn < 1.0 || std::fabs(n - rn) > 1e-6 * rn + 1e-12) {
        std::ostringstream os;
        os << "spacing h=" << h << " does not divide the " << axis << " extent [" << lo << ", "
           << hi << "]";
        throw GridError(os.str());
    }
    return static_cast<int>(rn);
}

}  // namespace

void DomainSpec::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw GridError("spacing h must be positive and finite");
    if (!(x1 > x0)) throw GridError("degenerate x extent: requires x0 < x1");
    axis_cells(x0, x1, h, "x");
    if (dim() == 2) {
        if (!(y1 > y0)) throw GridError("degenerate y extent: requires y0 < y1");
        axis_cells(y0, y1, h, "y");
    }
    if (kind == DomainKind::disc) {
        if (!(radius > 0.0)) throw GridError("disc radius must be positive");
        if (!(cx - radius > x0 && cx + radius < x1 && cy - radius > y0 && cy + radius < y1))
            throw GridError("disc mask must fit strictly inside the bounding rectangle");
    }
}

DomainSpec DomainSpec::interval(double x0, double x1, double h) {
    DomainSpec s;
    s.kind = DomainKind::interval;
    s.x0 = x0;
    s.x1 = x1;
    s.h = h;
    s.validate();
    return s;
}

DomainSpec DomainSpec::rectangle(double x0, double x1, double y0, double y1, double h) {
    DomainSpec s;
    s.kind = DomainKind::rectangle;
    s.x0 = x0;
    s.x1 = x1;
    s.y0 = y0;
    s.y1 = y1;
    s.h = h;
    s.validate();
    return s;
}

DomainSpec DomainSpec::disc(double cx, double cy, double radius, double margin, double h) {
    DomainSpec s;
    s.kind = DomainKind::disc;
    s.cx = cx;
    s.cy = cy;
    s.radius = radius;
    s.x0 = cx - radius - margin;
    s.x1 = cx + radius + margin;
    s.y0 = cy - radius - margin;
    s.y1 = cy + radius + margin;
    s.h = h;
    s.validate();
    return s;
}

std::shared_ptr<const Grid> build_grid(const DomainSpec& spec) {
    spec.validate();
    auto grid = std::make_shared<Grid>();
    Grid& g = *grid;
    g.spec = spec;
    g.nx = axis_cells(spec.x0, spec.x1, spec.h, "x") + 1;
    g.ny = spec.dim() == 2 ? axis_cells(spec.y0, spec.y1, spec.h, "y") + 1 : 1;
    g.cls.assign(g.cells(), NodeClass::exterior);

    // Mask: which lattice points belong to the domain closure.
    auto masked = [&](int ix, int iy) -> bool {
        if (ix < 0 || ix >= g.nx || iy < 0 || iy >= g.ny) return false;
        if (spec.kind != DomainKind::disc) return true;
        double dx = g.x(ix) - spec.cx;
        double dy = g.y(iy) - spec.cy;
        return dx * dx + dy * dy < spec.radius * spec.radius * (1.0 - 1e-12);
    };

    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            if (!masked(ix, iy)) continue;
            bool collar = !masked(ix - 1, iy) || !masked(ix + 1, iy);
            if (spec.dim() == 2) collar = collar || !masked(ix, iy - 1) || !masked(ix, iy + 1);
            g.cls[g.cell(ix, iy)] = collar ? NodeClass::boundary : NodeClass::interior;
        }
    }

    for (std::size_t c = 0; c < g.cells(); ++c) {
        if (g.cls[c] == NodeClass::interior) g.interior.push_back(static_cast<std::uint32_t>(c));
        if (g.cls[c] == NodeClass::boundary) g.boundary.push_back(static_cast<std::uint32_t>(c));
    }
    if (g.interior.empty()) throw GridError("domain has no interior nodes at this spacing");
    return grid;
}

StencilShape StencilShape::make(double eps, double h) {
    if (eps < h * (1.0 - 1e-12)) throw GridError("stencil radius eps must be >= grid spacing h");
    StencilShape s;
    double r = eps / h;
    double r2 = r * r * (1.0 + 1e-9) + 1e-9;
    s.k = static_cast<int>(std::floor(std::sqrt(r2)));
    s.halfwidth.resize(2 * s.k + 1);
    for (int dy = -s.k; dy <= s.k; ++dy) {
        double w2 = r2 - static_cast<double>(dy) * dy;
        s.halfwidth[dy + s.k] = w2 < 0.0 ? -1 : static_cast<int>(std::floor(std::sqrt(w2)));
    }
    return s;
}

std::vector<std::uint32_t> ball_stencil(const Grid& grid, std::size_t center, double eps) {
    StencilShape s = StencilShape::make(eps, grid.h());
    int cx = grid.ix_of(center), cy = grid.iy_of(center);
    std::vector<std::uint32_t> out;
    int klo = grid.dim() == 1 ? 0 : -s.k;
    int khi = grid.dim() == 1 ? 0 : s.k;
    for (int dy = klo; dy <= khi; ++dy) {
        int w = s.halfwidth[grid.dim() == 1 ? s.k : dy + s.k];
        if (w < 0) continue;
        for (int dx = -w; dx <= w; ++dx) {
            int ix = cx + dx, iy = cy + dy;
            if (grid.at(ix, iy) == NodeClass::exterior) continue;
            out.push_back(static_cast<std::uint32_t>(grid.cell(ix, iy)));
        }
    }
    return out;
}

BoundaryData sample_boundary(const std::function<double(double, double)>& g, const Grid& grid,
                             const std::string& src) {
    BoundaryData bd;
    bd.expr_src = src;
    bd.values.reserve(grid.boundary.size());
    for (std::uint32_t c : grid.boundary) {
        double x = grid.x(grid.ix_of(c)), y = grid.y(grid.iy_of(c));
        double v;
        try {
            v = g(x, y);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "boundary expression failed at node (x=" << x;
            if (grid.dim() == 2) os << ", y=" << y;
            os << "): " << e.what();
            throw GridError(os.str());
        }
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "boundary expression non-finite at node (x=" << x;
            if (grid.dim() == 2) os << ", y=" << y;
            os << ")";
            throw GridError(os.str());
        }
        bd.values.push_back(v);
    }

    double lip = 0.0;
    for (std::size_t i = 0; i < grid.boundary.size(); ++i) {
        double xi = grid.x(grid.ix_of(grid.boundary[i]));
        double yi = grid.y(grid.iy_of(grid.boundary[i]));
        for (std::size_t j = i + 1; j < grid.boundary.size(); ++j) {
            double dx = grid.x(grid.ix_of(grid.boundary[j])) - xi;
            double dy = grid.y(grid.iy_of(grid.boundary[j])) - yi;
            double d = std::sqrt(dx * dx + dy * dy);
            if (d > 0.0) lip = std::max(lip, std::fabs(bd.values[i] - bd.values[j]) / d);
        }
    }
    bd.lipschitz_estimate = lip;
    return bd;
}

BoundaryData sample_boundary(const Expression& g, const Grid& grid) {
    return sample_boundary([&](double x, double y) { return g.eval(x, y); }, grid, g.source());
}

double BoundaryData::max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values) m = std::max(m, v);
    return m;
}

double BoundaryData::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values) m = std::min(m, v);
    return m;
}

void GridFunction::impose_boundary(const BoundaryData& g) {
    const Grid& gr = grid();
    if (g.values.size() != gr.boundary.size())
        throw GridError("boundary data does not match grid");
    for (std::size_t i = 0; i < gr.boundary.size(); ++i) v_[gr.boundary[i]] = g.values[i];
}

bool GridFunction::all_finite() const {
    const Grid& gr = grid();
    for (std::size_t c = 0; c < v_.size(); ++c)
        if (gr.cls[c] != NodeClass::exterior && !std::isfinite(v_[c])) return false;
    return true;
}

double GridFunction::max_interior() const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::uint32_t c : grid().interior) m = std::max(m, v_[c]);
    return m;
}

double GridFunction::min_interior() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::uint32_t c : grid().interior) m = std::min(m, v_[c]);
    return m;
}

double GridFunction::range() const {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const Grid& gr = grid();
    for (std::size_t c = 0; c < v_.size(); ++c) {
        if (gr.cls[c] == NodeClass::exterior) continue;
        lo = std::min(lo, v_[c]);
        hi = std::max(hi, v_[c]);
    }
    return hi - lo;
}

double sup_diff_interior(const GridFunction& a, const GridFunction& b) {
    if (&a.grid() != &b.grid() && (a.grid().nx != b.grid().nx || a.grid().ny != b.grid().ny))
        throw GridError("grid mismatch");
    double m = 0.0;
    for (std::uint32_t c : a.grid().interior) m = std::max(m, std::fabs(a[c] - b[c]));
    return m;
}

}  // namespace aronsson
