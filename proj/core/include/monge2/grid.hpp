#pragma once

#include "monge2/spectral.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace monge2 {

using Index3 = std::array<std::int64_t, 3>;
using ScalarFunction = std::function<double(const Vec3&)>;

enum class DomainKind { Box, Ball };

struct DomainShape {
    DomainKind kind = DomainKind::Box;
    Vec3 center{};
    /// Ball radius; unused for boxes.
    double radius = 1.0;
};

enum class NodeKind : std::uint8_t { Inactive = 0, Boundary = 1, Interior = 2 };

/// Scalar field on a uniform box grid, x-fastest, with a node classification.
///
/// Interior nodes are the unknowns. Boundary nodes carry Dirichlet values and
/// are exactly the non-interior nodes touched by some interior 18-neighbour
/// stencil (plus, for boxes, the whole face layer).
class GridField {
public:
    /// Box [lower, upper] with n nodes per axis; interior = nodes off the faces.
    static GridField box(std::int64_t n, const Vec3& lower, const Vec3& upper);

    /// Ball of the given radius masked out of the bounding box with n nodes per
    /// axis; interior = nodes with |x - center| < radius - h/2.
    static GridField ball(std::int64_t n, double radius, const Vec3& center = {});

    const Index3& extents() const noexcept { return extents_; }
    const Vec3& spacing() const noexcept { return spacing_; }
    const Vec3& origin() const noexcept { return origin_; }
    const DomainShape& domain() const noexcept { return domain_; }

    std::size_t size() const noexcept { return values_.size(); }
    std::size_t linear(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept {
        return static_cast<std::size_t>(i + extents_[0] * (j + extents_[1] * k));
    }
    Index3 index3(std::size_t node) const noexcept;
    Vec3 position(std::size_t node) const noexcept;

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    double& operator[](std::size_t node) noexcept { return values_[node]; }
    double operator[](std::size_t node) const noexcept { return values_[node]; }

    NodeKind kind(std::size_t node) const noexcept { return kinds_[node]; }
    bool is_interior(std::size_t node) const noexcept { return kinds_[node] == NodeKind::Interior; }

    /// Interior nodes in increasing linear order; position = unknown index.
    const std::vector<std::size_t>& interior_nodes() const noexcept { return interior_; }
    const std::vector<std::size_t>& boundary_nodes() const noexcept { return boundary_; }

    std::vector<bool> interior_mask() const;
    std::vector<double> boundary_values() const;

    /// Sets every boundary node to fn(position).
    void set_boundary(const ScalarFunction& fn);
    /// Sets every interior and boundary node to fn(position).
    void fill(const ScalarFunction& fn);

    /// Largest distance from the domain center to a boundary node.
    double boundary_circumradius() const noexcept;

private:
    GridField(const Index3& extents, const Vec3& spacing, const Vec3& origin, const DomainShape& domain);
    void index_nodes();

    Index3 extents_{};
    Vec3 spacing_{};
    Vec3 origin_{};
    DomainShape domain_;
    std::vector<double> values_;
    std::vector<NodeKind> kinds_;
    std::vector<std::size_t> interior_;
    std::vector<std::size_t> boundary_;
};

/// Central-difference Hessian at a node (3-point diagonal, 4-point cross terms).
/// Throws BoundaryStencilError when a stencil neighbour is inactive or off-grid.
SymMatrix3 hessian_at(const GridField& field, std::size_t node);

/// Same, without classification checks; the caller guarantees an interior node.
SymMatrix3 hessian_unchecked(const GridField& field, std::size_t node) noexcept;

} // namespace monge2
