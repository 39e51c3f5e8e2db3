#pragma once

#include "rarl/random.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace rarl {

/// Parameter-shaped container used for gradients and SGD steps.
struct NetworkGradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    double norm() const;
    void scale(double factor);
};

/// Fully connected Q-network: rectifier hidden layers, linear output layer.
/// weights[l] has shape (layer_sizes[l+1], layer_sizes[l]).
class QNetwork {
public:
    QNetwork() = default;
    /// All-zero parameters.
    explicit QNetwork(std::vector<int> layer_sizes);

    /// Weights and biases uniform in +-1/sqrt(fan_in).
    static QNetwork random(std::vector<int> layer_sizes, Rng& rng);

    const std::vector<int>& layer_sizes() const { return sizes_; }
    int input_size() const { return sizes_.front(); }
    int output_size() const { return sizes_.back(); }
    std::size_t layer_count() const { return weights.size(); }
    std::size_t parameter_count() const;

    /// Throws ContractViolation on an input length mismatch.
    Eigen::VectorXd forward(std::span<const double> input) const;
    /// Column-per-sample batch forward.
    Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

    /// Mean over the batch of (Q(s_i, a_i) - y_i)^2 and, if `grad` is
    /// non-null, its gradient by backpropagation.
    double squared_error(const Eigen::MatrixXd& inputs, std::span<const int> actions,
                         std::span<const double> targets, NetworkGradients* grad) const;

    void apply_sgd(const NetworkGradients& grad, double learning_rate);

    std::vector<double> flat_parameters() const;
    void set_flat_parameters(std::span<const double> values);

    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    friend bool operator==(const QNetwork& a, const QNetwork& b);

private:
    std::vector<int> sizes_;
};

}  // namespace rarl
