#include "etgossip/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace etg {

void ObjectiveSuite::check_node(std::size_t i) const {
    if (i >= nodes()) {
        throw std::out_of_range("node index " + std::to_string(i) + " out of range for " +
                                std::to_string(nodes()) + " nodes");
    }
}

void ObjectiveSuite::check_dim(const Eigen::Ref<const Vector>& x) const {
    if (static_cast<std::size_t>(x.size()) != dim()) {
        throw DimensionError("model has dimension " + std::to_string(x.size()) + ", objective expects " +
                             std::to_string(dim()));
    }
}

double ObjectiveSuite::global_value(const Eigen::Ref<const Vector>& x) const {
    double total = 0.0;
    for (std::size_t i = 0; i < nodes(); ++i) total += local_value(i, x);
    return total / static_cast<double>(nodes());
}

Vector ObjectiveSuite::global_gradient(const Eigen::Ref<const Vector>& x) const {
    Vector total = Vector::Zero(static_cast<Eigen::Index>(dim()));
    for (std::size_t i = 0; i < nodes(); ++i) total += local_gradient(i, x);
    return total / static_cast<double>(nodes());
}

// --- QuadraticSuite --------------------------------------------------------

QuadraticSuite::QuadraticSuite(Matrix a, std::vector<Vector> targets, double alpha)
    : a_(std::move(a)), targets_(std::move(targets)), alpha_(alpha) {
    if (targets_.size() < 1) throw std::invalid_argument("quadratic suite needs at least one node");
    if (a_.rows() < 1 || a_.cols() < 1) throw DimensionError("A must be non-empty");
    if (alpha_ < 0.0) throw std::invalid_argument("alpha must be nonnegative");
    for (const auto& b : targets_) {
        if (b.size() != a_.rows()) throw DimensionError("target length must equal rows of A");
    }
    gram_ = a_.transpose() * a_;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_, Eigen::EigenvaluesOnly);
    lips_ = eig.eigenvalues().maxCoeff();

    mean_target_ = Vector::Zero(a_.rows());
    for (const auto& b : targets_) mean_target_ += b;
    mean_target_ /= static_cast<double>(targets_.size());

    beta_sq_ = 0.0;
    for (const auto& b : targets_) {
        beta_sq_ = std::max(beta_sq_, (a_.transpose() * (mean_target_ - b)).squaredNorm());
    }

    minimizer_ = a_.colPivHouseholderQr().solve(mean_target_);
    optimal_value_ = QuadraticSuite::global_value(minimizer_);
}

double QuadraticSuite::local_value(std::size_t i, const Eigen::Ref<const Vector>& x) const {
    check_node(i);
    check_dim(x);
    return 0.5 * (a_ * x - targets_[i]).squaredNorm();
}

Vector QuadraticSuite::local_gradient(std::size_t i, const Eigen::Ref<const Vector>& x) const {
    check_node(i);
    check_dim(x);
    return a_.transpose() * (a_ * x - targets_[i]);
}

Vector QuadraticSuite::stochastic_gradient(std::size_t i, const Eigen::Ref<const Vector>& x,
                                           RandomStream& stream) const {
    Vector g = local_gradient(i, x);
    if (alpha_ > 0.0) {
        const double sd = alpha_ / std::sqrt(static_cast<double>(g.size()));
        for (Eigen::Index k = 0; k < g.size(); ++k) g(k) += sd * stream.normal();
    }
    return g;
}

double QuadraticSuite::global_value(const Eigen::Ref<const Vector>& x) const {
    check_dim(x);
    const Vector r = a_ * x;
    double total = 0.0;
    for (const auto& b : targets_) total += 0.5 * (r - b).squaredNorm();
    return total / static_cast<double>(targets_.size());
}

Vector QuadraticSuite::global_gradient(const Eigen::Ref<const Vector>& x) const {
    check_dim(x);
    return a_.transpose() * (a_ * x - mean_target_);
}

QuadraticSuite make_quadratic_suite(std::size_t n, std::size_t d, double spread, double alpha,
                                    std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("quadratic suite needs n >= 2");
    if (d < 1) throw std::invalid_argument("quadratic suite needs d >= 1");
    if (spread < 0.0) throw std::invalid_argument("spread must be nonnegative");
    const auto dim = static_cast<Eigen::Index>(d);
    RandomStream rng = RandomStream::derive(seed, Purpose::objective, {n, d, 0});

    Matrix a = Matrix::Identity(dim, dim);
    const double scale = 0.25 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) a(r, c) += scale * rng.normal();
    }
    Vector mean(dim);
    for (Eigen::Index k = 0; k < dim; ++k) mean(k) = rng.normal();

    std::vector<Vector> offsets(n, Vector(dim));
    Vector centre = Vector::Zero(dim);
    for (auto& u : offsets) {
        for (Eigen::Index k = 0; k < dim; ++k) u(k) = rng.normal();
        centre += u;
    }
    centre /= static_cast<double>(n);
    std::vector<Vector> targets;
    targets.reserve(n);
    for (const auto& u : offsets) targets.push_back(mean + spread * (u - centre));
    return QuadraticSuite(std::move(a), std::move(targets), alpha);
}

// --- LogisticSuite ---------------------------------------------------------

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

LogisticSuite::LogisticSuite(std::vector<std::vector<LabeledSample>> samples, double lambda,
                             std::size_t batch)
    : samples_(std::move(samples)), lambda_(lambda), batch_(batch) {
    if (samples_.empty()) throw std::invalid_argument("logistic suite needs at least one node");
    if (lambda_ < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    if (batch_ == 0) throw std::invalid_argument("batch must be at least 1");
    dim_ = 0;
    double max_norm_sq = 0.0;
    for (const auto& node : samples_) {
        if (node.empty()) throw std::invalid_argument("every node needs at least one sample");
        for (const auto& s : node) {
            if (dim_ == 0) dim_ = static_cast<std::size_t>(s.features.size());
            if (static_cast<std::size_t>(s.features.size()) != dim_) {
                throw DimensionError("inconsistent feature dimension");
            }
            max_norm_sq = std::max(max_norm_sq, s.features.squaredNorm());
        }
    }
    if (dim_ == 0) throw DimensionError("features must be non-empty");
    lips_ = lambda_ + max_norm_sq / 4.0;
}

double LogisticSuite::local_value(std::size_t i, const Eigen::Ref<const Vector>& x) const {
    check_node(i);
    check_dim(x);
    double total = 0.0;
    for (const auto& s : samples_[i]) total += softplus(-s.label * s.features.dot(x));
    return total / static_cast<double>(samples_[i].size()) + 0.5 * lambda_ * x.squaredNorm();
}

Vector LogisticSuite::local_gradient(std::size_t i, const Eigen::Ref<const Vector>& x) const {
    check_node(i);
    check_dim(x);
    Vector g = Vector::Zero(x.size());
    for (const auto& s : samples_[i]) {
        g -= s.label * sigmoid(-s.label * s.features.dot(x)) * s.features;
    }
    g /= static_cast<double>(samples_[i].size());
    return g + lambda_ * x;
}

Vector LogisticSuite::stochastic_gradient(std::size_t i, const Eigen::Ref<const Vector>& x,
                                          RandomStream& stream) const {
    check_node(i);
    check_dim(x);
    const auto& node = samples_[i];
    Vector g = Vector::Zero(x.size());
    for (std::size_t b = 0; b < batch_; ++b) {
        const auto& s = node[static_cast<std::size_t>(stream.below(node.size()))];
        g -= s.label * sigmoid(-s.label * s.features.dot(x)) * s.features;
    }
    g /= static_cast<double>(batch_);
    return g + lambda_ * x;
}

LogisticSuite make_logistic_suite(std::size_t n, std::size_t d, std::size_t samples_per_node,
                                  double skew, double lambda, std::size_t batch, std::uint64_t seed) {
    if (n < 2 || d < 1 || samples_per_node < 1) {
        throw std::invalid_argument("logistic suite needs n >= 2, d >= 1 and samples_per_node >= 1");
    }
    if (!(skew >= 0.0 && skew <= 1.0)) throw std::invalid_argument("skew must lie in [0, 1]");
    const auto dim = static_cast<Eigen::Index>(d);
    RandomStream rng = RandomStream::derive(seed, Purpose::objective, {n, d, 1});
    Vector mu(dim);
    for (Eigen::Index k = 0; k < dim; ++k) mu(k) = rng.normal();
    mu *= 1.5 / mu.norm();

    std::vector<std::vector<LabeledSample>> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double home = (i % 2 == 0) ? 1.0 : -1.0;
        samples[i].reserve(samples_per_node);
        for (std::size_t s = 0; s < samples_per_node; ++s) {
            const double label = rng.bernoulli(skew) ? home : -home;
            Vector f(dim);
            for (Eigen::Index k = 0; k < dim; ++k) f(k) = label * mu(k) + rng.normal();
            samples[i].push_back({std::move(f), label});
        }
    }
    return LogisticSuite(std::move(samples), lambda, batch);
}

double measure_heterogeneity(const ObjectiveSuite& suite, std::span<const Vector> probes) {
    if (probes.empty()) throw std::invalid_argument("need at least one probe point");
    double worst = 0.0;
    for (const auto& x : probes) {
        const Vector global = suite.global_gradient(x);
        for (std::size_t i = 0; i < suite.nodes(); ++i) {
            worst = std::max(worst, (suite.local_gradient(i, x) - global).squaredNorm());
        }
    }
    return worst;
}

}  // namespace etg
