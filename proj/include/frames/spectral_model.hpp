#pragma once

#include <cstddef>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "frames/common.hpp"

namespace frames {

enum class ManifoldKind { circle, sphere2, line };

std::string to_string(ManifoldKind kind);

// Eigen-decomposition of sqrt(L) on a compact model. Indices are sorted by
// eigenvalue, then by order inside a degree block; degeneracy is explicit.
class SpectralModel {
public:
    virtual ~SpectralModel() = default;

    virtual ManifoldKind kind() const = 0;
    virtual int dimension() const = 0;
    virtual double volume() const = 0;

    std::size_t size() const noexcept { return eigenvalues_.size(); }
    const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
    double eigenvalue(std::size_t index) const;
    int degree(std::size_t index) const;
    int max_degree() const noexcept { return degrees_.empty() ? -1 : degrees_.back(); }
    double max_eigenvalue() const noexcept { return eigenvalues_.empty() ? 0.0 : eigenvalues_.back(); }

    // Number of indices with eigenvalue <= omega; always a whole number of degree blocks.
    std::size_t count_upto(double omega) const;
    // Largest degree d with band_of_degree(d) <= omega (not capped by the model), -1 if none.
    virtual int degree_of_band(double omega) const = 0;
    // sqrt(L) eigenvalue at degree d (defined beyond the model's range too).
    virtual double band_of_degree(int degree) const = 0;
    // Number of eigenfunctions of degree <= d (not capped by the model).
    virtual std::size_t count_of_degree(int degree) const = 0;
    // Eigenvalue bound for products of functions with bands a and b.
    double product_band(double a, double b) const;

    // Values of the first out.size() eigenfunctions at p.
    virtual void eval_basis(const Point& p, std::span<Complex> out) const = 0;
    // A real orthonormal basis of the span of the first out.size() eigenfunctions;
    // out.size() must be a whole number of degree blocks.
    virtual void eval_real_basis(const Point& p, std::span<double> out) const = 0;
    Complex eval(std::size_t index, const Point& p) const;

    const std::vector<Point>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    // Quadrature integrates u_l conj(u_m) exactly when degree(l) + degree(m) <= exact_degree().
    int exact_degree() const noexcept { return exact_degree_; }
    // Same limit in sqrt(L) units.
    double exact_band() const { return band_of_degree(exact_degree_); }

    double distance(const Point& p, const Point& q) const;
    // Throws DomainError unless p lies on the manifold within 1e-12.
    virtual void check_point(const Point& p) const = 0;
    virtual Point random_point(std::mt19937_64& rng) const = 0;

    // sum_l c_l u_l at every quadrature node.
    virtual VectorXc synthesize_nodes(const VectorXc& coeffs) const;
    // sum_i w_i g(x_i) conj(u_l(x_i)) for the first count indices.
    virtual VectorXc analyze_nodes(const VectorXc& values, std::size_t count) const;

    // Quadrature moments of the first count real basis functions.
    virtual Eigen::VectorXd real_basis_moments(std::size_t count) const;

    // sum_d w_d Z_d(c) where Z_d(p.q) = sum_{degree(l) = d} u_l(p) conj(u_l(q)).
    virtual double zonal_sum(std::span<const double> degree_weights, double cos_angle) const = 0;

protected:
    std::vector<double> eigenvalues_;
    std::vector<int> degrees_;
    std::vector<Point> nodes_;
    std::vector<double> weights_;
    int exact_degree_ = 0;
};

using ModelPtr = std::shared_ptr<const SpectralModel>;

// Number of worker threads for point maps (FRAMES_THREADS caps it).
int worker_threads();

}  // namespace frames
