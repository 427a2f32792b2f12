#include "monge2/grid.hpp"

#include "monge2/errors.hpp"

#include <cmath>
#include <string>

namespace monge2 {

namespace {

// The 18 neighbours used by the Hessian stencil: 6 face and 12 edge offsets.
constexpr std::array<Index3, 18> kStencil = {{
    {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1},
    {1, 1, 0}, {1, -1, 0}, {-1, 1, 0}, {-1, -1, 0},
    {1, 0, 1}, {1, 0, -1}, {-1, 0, 1}, {-1, 0, -1},
    {0, 1, 1}, {0, 1, -1}, {0, -1, 1}, {0, -1, -1},
}};

void check_extent(std::int64_t n) {
    if (n < 5) throw InputError("grids need at least 5 nodes per axis, got " + std::to_string(n));
}

} // namespace

GridField::GridField(const Index3& extents, const Vec3& spacing, const Vec3& origin, const DomainShape& domain)
    : extents_(extents), spacing_(spacing), origin_(origin), domain_(domain) {
    const auto n = static_cast<std::size_t>(extents[0] * extents[1] * extents[2]);
    values_.assign(n, 0.0);
    kinds_.assign(n, NodeKind::Inactive);
}

GridField GridField::box(std::int64_t n, const Vec3& lower, const Vec3& upper) {
    check_extent(n);
    Vec3 h{};
    Vec3 center{};
    for (std::size_t a = 0; a < 3; ++a) {
        if (!(upper[a] > lower[a])) throw InputError("box requires lower < upper on every axis");
        h[a] = (upper[a] - lower[a]) / static_cast<double>(n - 1);
        center[a] = 0.5 * (lower[a] + upper[a]);
    }
    GridField g({n, n, n}, h, lower, {DomainKind::Box, center, 0.0});
    for (std::int64_t k = 0; k < n; ++k)
        for (std::int64_t j = 0; j < n; ++j)
            for (std::int64_t i = 0; i < n; ++i) {
                const bool face = i == 0 || j == 0 || k == 0 || i == n - 1 || j == n - 1 || k == n - 1;
                g.kinds_[g.linear(i, j, k)] = face ? NodeKind::Boundary : NodeKind::Interior;
            }
    g.index_nodes();
    return g;
}

GridField GridField::ball(std::int64_t n, double radius, const Vec3& center) {
    check_extent(n);
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("ball radius must be positive");
    const double h = 2.0 * radius / static_cast<double>(n - 1);
    const Vec3 origin{center[0] - radius, center[1] - radius, center[2] - radius};
    GridField g({n, n, n}, {h, h, h}, origin, {DomainKind::Ball, center, radius});
    const double cutoff = radius - 0.5 * h;
    for (std::size_t node = 0; node < g.size(); ++node) {
        const Vec3 x = g.position(node);
        const double r = std::hypot(x[0] - center[0], x[1] - center[1], x[2] - center[2]);
        if (r < cutoff) g.kinds_[node] = NodeKind::Interior;
    }
    for (std::size_t node = 0; node < g.size(); ++node) {
        if (g.kinds_[node] != NodeKind::Interior) continue;
        const Index3 c = g.index3(node);
        for (const auto& o : kStencil) {
            const std::size_t nb = g.linear(c[0] + o[0], c[1] + o[1], c[2] + o[2]);
            if (g.kinds_[nb] == NodeKind::Inactive) g.kinds_[nb] = NodeKind::Boundary;
        }
    }
    g.index_nodes();
    if (g.interior_.empty()) throw InputError("ball grid has no interior nodes");
    return g;
}

void GridField::index_nodes() {
    interior_.clear();
    boundary_.clear();
    for (std::size_t node = 0; node < kinds_.size(); ++node) {
        if (kinds_[node] == NodeKind::Interior) interior_.push_back(node);
        else if (kinds_[node] == NodeKind::Boundary) boundary_.push_back(node);
    }
}

Index3 GridField::index3(std::size_t node) const noexcept {
    const auto n = static_cast<std::int64_t>(node);
    const std::int64_t i = n % extents_[0];
    const std::int64_t j = (n / extents_[0]) % extents_[1];
    const std::int64_t k = n / (extents_[0] * extents_[1]);
    return {i, j, k};
}

Vec3 GridField::position(std::size_t node) const noexcept {
    const Index3 c = index3(node);
    return {origin_[0] + static_cast<double>(c[0]) * spacing_[0],
            origin_[1] + static_cast<double>(c[1]) * spacing_[1],
            origin_[2] + static_cast<double>(c[2]) * spacing_[2]};
}

std::vector<bool> GridField::interior_mask() const {
    std::vector<bool> mask(kinds_.size());
    for (std::size_t i = 0; i < kinds_.size(); ++i) mask[i] = kinds_[i] == NodeKind::Interior;
    return mask;
}

std::vector<double> GridField::boundary_values() const {
    std::vector<double> out;
    out.reserve(boundary_.size());
    for (std::size_t node : boundary_) out.push_back(values_[node]);
    return out;
}

void GridField::set_boundary(const ScalarFunction& fn) {
    for (std::size_t node : boundary_) values_[node] = fn(position(node));
}

void GridField::fill(const ScalarFunction& fn) {
    for (std::size_t node : interior_) values_[node] = fn(position(node));
    set_boundary(fn);
}

double GridField::boundary_circumradius() const noexcept {
    double r = 0.0;
    for (std::size_t node : boundary_) {
        const Vec3 x = position(node);
        r = std::max(r, std::hypot(x[0] - domain_.center[0], x[1] - domain_.center[1], x[2] - domain_.center[2]));
    }
    return r;
}

SymMatrix3 hessian_unchecked(const GridField& f, std::size_t node) noexcept {
    const Index3& e = f.extents();
    const auto sx = static_cast<std::size_t>(1);
    const auto sy = static_cast<std::size_t>(e[0]);
    const auto sz = static_cast<std::size_t>(e[0] * e[1]);
    const std::array<std::size_t, 3> stride{sx, sy, sz};
    const Vec3& h = f.spacing();
    const double u = f[node];
    SymMatrix3 m;
    for (int a = 0; a < 3; ++a) {
        const std::size_t s = stride[static_cast<std::size_t>(a)];
        const double ha = h[static_cast<std::size_t>(a)];
        m.at(a, a) = (f[node + s] - 2.0 * u + f[node - s]) / (ha * ha);
        for (int b = a + 1; b < 3; ++b) {
            const std::size_t t = stride[static_cast<std::size_t>(b)];
            const double hb = h[static_cast<std::size_t>(b)];
            m.at(a, b) = (f[node + s + t] - f[node + s - t] - f[node - s + t] + f[node - s - t]) / (4.0 * ha * hb);
        }
    }
    return m;
}

SymMatrix3 hessian_at(const GridField& field, std::size_t node) {
    if (node >= field.size()) throw BoundaryStencilError("node index outside the grid");
    const Index3 c = field.index3(node);
    const Index3& e = field.extents();
    for (const auto& o : kStencil) {
        const Index3 p{c[0] + o[0], c[1] + o[1], c[2] + o[2]};
        for (std::size_t a = 0; a < 3; ++a)
            if (p[a] < 0 || p[a] >= e[a])
                throw BoundaryStencilError("Hessian stencil leaves the grid at node " + std::to_string(node));
        if (field.kind(field.linear(p[0], p[1], p[2])) == NodeKind::Inactive)
            throw BoundaryStencilError("Hessian stencil reads an inactive node at node " + std::to_string(node));
    }
    return hessian_unchecked(field, node);
}

} // namespace monge2
