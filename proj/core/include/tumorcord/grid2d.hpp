#pragma once

#include <cstddef>
#include <vector>

namespace tumorcord {

/// Node-centred uniform grid on [0, Lx] x [0, Lz]; x is the transverse
/// direction (vessel wall at x = 0), z runs along the vessel.
struct Grid2D {
    int nx = 128;
    int nz = 512;
    double Lx = 2.5;
    double Lz = 10.0;

    double hx() const noexcept { return Lx / (nx - 1); }
    double hz() const noexcept { return Lz / (nz - 1); }
    double x(int i) const noexcept { return i == nx - 1 ? Lx : i * hx(); }
    double z(int j) const noexcept { return j == nz - 1 ? Lz : j * hz(); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(nz); }
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }
    /// Control-volume area of node (i, j); half/quarter cells on the boundary.
    double volume(int i, int j) const noexcept {
        const double wx = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
        const double wz = (j == 0 || j == nz - 1) ? 0.5 : 1.0;
        return wx * wz * hx() * hz();
    }

    /// Throws ConfigError when nx, nz < 16 or an extent is nonpositive.
    void validate() const;
};

/// Scalar nodal field, row-major with x fastest.
class Field2D {
public:
    Field2D() = default;
    Field2D(const Grid2D& grid, double value)
        : nx_(grid.nx), nz_(grid.nz), data_(grid.size(), value) {}

    double& operator()(int i, int j) noexcept { return data_[idx(i, j)]; }
    double operator()(int i, int j) const noexcept { return data_[idx(i, j)]; }
    double& operator[](std::size_t k) noexcept { return data_[k]; }
    double operator[](std::size_t k) const noexcept { return data_[k]; }

    int nx() const noexcept { return nx_; }
    int nz() const noexcept { return nz_; }
    std::size_t size() const noexcept { return data_.size(); }
    std::vector<double>& values() noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }

    double min() const noexcept;
    double max() const noexcept;

private:
    std::size_t idx(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
    }

    int nx_ = 0;
    int nz_ = 0;
    std::vector<double> data_;
};

struct VectorField2D {
    Field2D vx;
    Field2D vz;
};

}  // namespace tumorcord
