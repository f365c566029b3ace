#include "frames/spectral_model.hpp"

#include <algorithm>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "frames/reduce.hpp"

namespace frames {

std::string to_string(ManifoldKind kind) {
    switch (kind) {
        case ManifoldKind::circle: return "circle";
        case ManifoldKind::sphere2: return "sphere2";
        case ManifoldKind::line: return "line";
    }
    return "unknown";
}

int worker_threads() {
    int n = 1;
#ifdef _OPENMP
    n = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("FRAMES_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return std::max(n, 1);
}

double SpectralModel::eigenvalue(std::size_t index) const {
    if (index >= eigenvalues_.size()) throw TruncationError("eigen index beyond model basis");
    return eigenvalues_[index];
}

int SpectralModel::degree(std::size_t index) const {
    if (index >= degrees_.size()) throw TruncationError("eigen index beyond model basis");
    return degrees_[index];
}

std::size_t SpectralModel::count_upto(double omega) const {
    const int d = std::min(degree_of_band(omega), max_degree());
    if (d < 0) return 0;
    return count_of_degree(d);
}

double SpectralModel::product_band(double a, double b) const {
    const int da = degree_of_band(a);
    const int db = degree_of_band(b);
    if (da < 0 || db < 0) return 0.0;
    return band_of_degree(da + db);
}

Complex SpectralModel::eval(std::size_t index, const Point& p) const {
    if (index >= size()) throw TruncationError("eigen index beyond model basis");
    std::vector<Complex> v(index + 1);
    eval_basis(p, v);
    return v[index];
}

double SpectralModel::distance(const Point& p, const Point& q) const { return angle_between(p, q); }

VectorXc SpectralModel::synthesize_nodes(const VectorXc& coeffs) const {
    if (static_cast<std::size_t>(coeffs.size()) > size()) throw TruncationError("coefficient vector longer than model basis");
    std::size_t count = static_cast<std::size_t>(coeffs.size());
    while (count > 0 && coeffs[count - 1] == Complex(0.0)) --count;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(nodes_.size());
    VectorXc out = VectorXc::Zero(n);
    if (count == 0) return out;
#pragma omp parallel num_threads(worker_threads())
    {
        std::vector<Complex> basis(count);
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            eval_basis(nodes_[i], basis);
            Complex s = 0.0;
            for (std::size_t l = 0; l < count; ++l) s += coeffs[l] * basis[l];
            out[i] = s;
        }
    }
    return out;
}

VectorXc SpectralModel::analyze_nodes(const VectorXc& values, std::size_t count) const {
    if (static_cast<std::size_t>(values.size()) != nodes_.size()) throw PreconditionError("grid length differs from node count");
    if (count > size()) throw TruncationError("analysis band beyond model basis");
    const std::size_t n = nodes_.size();
    // Terms are stored per node and reduced pairwise per coefficient.
    Eigen::MatrixXcd terms(count, n);
#pragma omp parallel num_threads(worker_threads())
    {
        std::vector<Complex> basis(count);
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            eval_basis(nodes_[i], basis);
            const Complex wv = weights_[i] * values[i];
            for (std::size_t l = 0; l < count; ++l) terms(l, i) = wv * std::conj(basis[l]);
        }
    }
    VectorXc out(count);
    std::vector<Complex> row(n);
    for (std::size_t l = 0; l < count; ++l) {
        for (std::size_t i = 0; i < n; ++i) row[i] = terms(l, i);
        out[l] = pairwise_sum(row);
    }
    return out;
}

Eigen::VectorXd SpectralModel::real_basis_moments(std::size_t count) const {
    const SpectralModel& model = *this;
    const auto& nodes = model.nodes();
    const auto& w = model.weights();
    const std::size_t n = nodes.size();
    // Accumulate per block of nodes, then reduce the blocks in order.
    constexpr std::size_t kBlock = 256;
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(static_cast<std::ptrdiff_t>(count), static_cast<std::ptrdiff_t>(blocks));
#pragma omp parallel num_threads(worker_threads())
    {
        std::vector<double> b(count);
#pragma omp for schedule(static)
        for (std::ptrdiff_t bi = 0; bi < static_cast<std::ptrdiff_t>(blocks); ++bi) {
            const std::size_t lo = static_cast<std::size_t>(bi) * kBlock;
            const std::size_t hi = std::min(n, lo + kBlock);
            for (std::size_t i = lo; i < hi; ++i) {
                model.eval_real_basis(nodes[i], b);
                for (std::size_t l = 0; l < count; ++l) partial(static_cast<std::ptrdiff_t>(l), bi) += w[i] * b[l];
            }
        }
    }
    Eigen::VectorXd m(static_cast<std::ptrdiff_t>(count));
    std::vector<double> row(blocks);
    for (std::size_t l = 0; l < count; ++l) {
        for (std::size_t b = 0; b < blocks; ++b) row[b] = partial(static_cast<std::ptrdiff_t>(l), static_cast<std::ptrdiff_t>(b));
        m[static_cast<std::ptrdiff_t>(l)] = pairwise_sum(row);
    }
    return m;
}

}  // namespace frames
