#include "aronsson/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace aronsson {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_csv(std::ostream& os, const GridFunction& u) {
    const Grid& g = u.grid();
    if (g.dim() == 1) {
        os << "ix,x,class,value\n";
        for (int ix = 0; ix < g.nx; ++ix) {
            NodeClass c = g.cls[g.cell(ix, 0)];
            if (c == NodeClass::exterior) continue;
            os << ix << ',' << fmt17(g.x(ix)) << ',' << to_string(c) << ','
               << fmt17(u[g.cell(ix, 0)]) << '\n';
        }
    } else {
        os << "ix,iy,x,y,class,value\n";
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                NodeClass c = g.cls[g.cell(ix, iy)];
                if (c == NodeClass::exterior) continue;
                os << ix << ',' << iy << ',' << fmt17(g.x(ix)) << ',' << fmt17(g.y(iy)) << ','
                   << to_string(c) << ',' << fmt17(u[g.cell(ix, iy)]) << '\n';
            }
        }
    }
}

void write_csv(const std::string& path, const GridFunction& u) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw CsvError("cannot open for writing: " + path);
    write_csv(os, u);
}

namespace {

struct Row {
    int ix = 0, iy = 0;
    double x = 0, y = 0;
    NodeClass cls = NodeClass::exterior;
    double value = 0;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

NodeClass parse_class(const std::string& s, int lineno) {
    if (s == "interior") return NodeClass::interior;
    if (s == "boundary") return NodeClass::boundary;
    throw CsvError("bad node class '" + s + "' on line " + std::to_string(lineno));
}

}  // namespace

GridFunction load_csv(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw CsvError("empty CSV");
    bool two_d;
    if (header == "ix,x,class,value")
        two_d = false;
    else if (header == "ix,iy,x,y,class,value")
        two_d = true;
    else
        throw CsvError("unrecognized CSV header: " + header);

    std::vector<Row> rows;
    std::string line;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto f = split(line);
        std::size_t want = two_d ? 6u : 4u;
        if (f.size() != want)
            throw CsvError("bad field count on line " + std::to_string(lineno));
        Row r;
        std::size_t i = 0;
        r.ix = std::stoi(f[i++]);
        if (two_d) r.iy = std::stoi(f[i++]);
        r.x = std::stod(f[i++]);
        if (two_d) r.y = std::stod(f[i++]);
        r.cls = parse_class(f[i++], lineno);
        r.value = std::stod(f[i]);
        if (r.ix < 0 || r.iy < 0) throw CsvError("negative index on line " + std::to_string(lineno));
        rows.push_back(r);
    }
    if (rows.empty()) throw CsvError("CSV has no node rows");

    int nx = 0, ny = 1;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    int big = std::numeric_limits<int>::max();
    int ixmin = big, ixmax = 0, iymin = two_d ? big : 0, iymax = 0;
    for (const Row& r : rows) {
        nx = std::max(nx, r.ix + 1);
        ny = std::max(ny, r.iy + 1);
        xmin = std::min(xmin, r.x);
        xmax = std::max(xmax, r.x);
        ymin = std::min(ymin, r.y);
        ymax = std::max(ymax, r.y);
        ixmin = std::min(ixmin, r.ix);
        ixmax = std::max(ixmax, r.ix);
        iymin = std::min(iymin, r.iy);
        iymax = std::max(iymax, r.iy);
    }

    auto grid = std::make_shared<Grid>();
    grid->spec.kind = two_d ? DomainKind::rectangle : DomainKind::interval;
    double hx = ixmax > ixmin ? (xmax - xmin) / (ixmax - ixmin) : 1.0;
    grid->spec.h = hx;
    grid->spec.x0 = xmin - ixmin * hx;
    grid->spec.x1 = grid->spec.x0 + (nx - 1) * hx;
    if (two_d) {
        grid->spec.y0 = ymin - iymin * hx;
        grid->spec.y1 = grid->spec.y0 + (ny - 1) * hx;
    }
    grid->nx = nx;
    grid->ny = ny;
    grid->cls.assign(grid->cells(), NodeClass::exterior);
    for (const Row& r : rows) grid->cls[grid->cell(r.ix, r.iy)] = r.cls;
    for (std::size_t c = 0; c < grid->cells(); ++c) {
        if (grid->cls[c] == NodeClass::interior)
            grid->interior.push_back(static_cast<std::uint32_t>(c));
        if (grid->cls[c] == NodeClass::boundary)
            grid->boundary.push_back(static_cast<std::uint32_t>(c));
    }

    std::shared_ptr<const Grid> cgrid = grid;
    GridFunction u(cgrid);
    for (const Row& r : rows) u[u.grid().cell(r.ix, r.iy)] = r.value;
    return u;
}

GridFunction load_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CsvError("cannot open: " + path);
    return load_csv(is);
}

}  // namespace aronsson
