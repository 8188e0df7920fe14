#pragma once

#include "etgossip/common.hpp"
#include "etgossip/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace etg {

// Per-node differentiable losses f_i; the global objective is their mean.
// Implementations are immutable after construction.
class ObjectiveSuite {
public:
    virtual ~ObjectiveSuite() = default;

    virtual std::size_t nodes() const noexcept = 0;
    virtual std::size_t dim() const noexcept = 0;
    // Certified gradient Lipschitz constant shared by every f_i.
    virtual double lipschitz() const noexcept = 0;

    virtual double local_value(std::size_t i, const Eigen::Ref<const Vector>& x) const = 0;
    virtual Vector local_gradient(std::size_t i, const Eigen::Ref<const Vector>& x) const = 0;
    // Unbiased estimate of local_gradient(i, x); deterministic given the stream.
    virtual Vector stochastic_gradient(std::size_t i, const Eigen::Ref<const Vector>& x,
                                       RandomStream& stream) const = 0;

    virtual double global_value(const Eigen::Ref<const Vector>& x) const;
    virtual Vector global_gradient(const Eigen::Ref<const Vector>& x) const;

protected:
    void check_node(std::size_t i) const;
    void check_dim(const Eigen::Ref<const Vector>& x) const;
};

// f_i(x) = 0.5 ||A x - b_i||^2 with A shared by all nodes, plus zero-mean
// Gaussian gradient noise with E||noise||^2 = alpha^2.
class QuadraticSuite final : public ObjectiveSuite {
public:
    QuadraticSuite(Matrix a, std::vector<Vector> targets, double alpha);

    std::size_t nodes() const noexcept override { return targets_.size(); }
    std::size_t dim() const noexcept override { return static_cast<std::size_t>(a_.cols()); }
    double lipschitz() const noexcept override { return lips_; }

    double local_value(std::size_t i, const Eigen::Ref<const Vector>& x) const override;
    Vector local_gradient(std::size_t i, const Eigen::Ref<const Vector>& x) const override;
    Vector stochastic_gradient(std::size_t i, const Eigen::Ref<const Vector>& x,
                               RandomStream& stream) const override;
    double global_value(const Eigen::Ref<const Vector>& x) const override;
    Vector global_gradient(const Eigen::Ref<const Vector>& x) const override;

    const Matrix& a() const noexcept { return a_; }
    const std::vector<Vector>& targets() const noexcept { return targets_; }
    const Vector& mean_target() const noexcept { return mean_target_; }
    double alpha() const noexcept { return alpha_; }
    // max_i ||A^T (b_bar - b_i)||^2, the same at every x.
    double beta_sq() const noexcept { return beta_sq_; }
    // Least-squares minimizer of the global objective and its value.
    const Vector& minimizer() const noexcept { return minimizer_; }
    double optimal_value() const noexcept { return optimal_value_; }

private:
    Matrix a_;
    Matrix gram_;  // A^T A
    std::vector<Vector> targets_;
    Vector mean_target_;
    double alpha_;
    double lips_;
    double beta_sq_;
    Vector minimizer_;
    double optimal_value_;
};

// A = I + 0.25 G / sqrt(d) with G standard normal; b_i = b_bar + spread u_i
// where the u_i are standard normal draws centred so that sum_i u_i = 0.
QuadraticSuite make_quadratic_suite(std::size_t n, std::size_t d, double spread, double alpha,
                                    std::uint64_t seed);

struct LabeledSample {
    Vector features;
    double label = 1.0;  // +1 or -1
};

// Regularized logistic regression on synthetic, label-skewed node datasets.
// Stochastic gradients average a minibatch drawn with replacement.
class LogisticSuite final : public ObjectiveSuite {
public:
    LogisticSuite(std::vector<std::vector<LabeledSample>> samples, double lambda, std::size_t batch);

    std::size_t nodes() const noexcept override { return samples_.size(); }
    std::size_t dim() const noexcept override { return dim_; }
    double lipschitz() const noexcept override { return lips_; }

    double local_value(std::size_t i, const Eigen::Ref<const Vector>& x) const override;
    Vector local_gradient(std::size_t i, const Eigen::Ref<const Vector>& x) const override;
    Vector stochastic_gradient(std::size_t i, const Eigen::Ref<const Vector>& x,
                               RandomStream& stream) const override;

    double lambda() const noexcept { return lambda_; }
    const std::vector<LabeledSample>& samples(std::size_t i) const { return samples_.at(i); }

private:
    std::vector<std::vector<LabeledSample>> samples_;
    std::size_t dim_;
    double lambda_;
    std::size_t batch_;
    double lips_;
};

// Each node draws `samples_per_node` points; with probability `skew` a point
// belongs to the node's home class (+1 for even nodes, -1 for odd nodes).
// Features are N(label * mu, I) for a shared random mean direction mu.
LogisticSuite make_logistic_suite(std::size_t n, std::size_t d, std::size_t samples_per_node,
                                  double skew, double lambda, std::size_t batch, std::uint64_t seed);

// max over probes and nodes of ||grad f_i(x) - grad f(x)||^2.
double measure_heterogeneity(const ObjectiveSuite& suite, std::span<const Vector> probes);

}  // namespace etg
