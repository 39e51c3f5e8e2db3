#include "rarl/qnetwork.hpp"

#include "rarl/errors.hpp"

#include <cmath>

namespace rarl {

double NetworkGradients::norm() const
{
    double sq = 0.0;
    for (const auto& w : weights) {
        sq += w.squaredNorm();
    }
    for (const auto& b : biases) {
        sq += b.squaredNorm();
    }
    return std::sqrt(sq);
}

void NetworkGradients::scale(double factor)
{
    for (auto& w : weights) {
        w *= factor;
    }
    for (auto& b : biases) {
        b *= factor;
    }
}

QNetwork::QNetwork(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes))
{
    if (sizes_.size() < 2) {
        throw ContractViolation("QNetwork: need at least input and output sizes");
    }
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        weights.push_back(Eigen::MatrixXd::Zero(sizes_[l + 1], sizes_[l]));
        biases.push_back(Eigen::VectorXd::Zero(sizes_[l + 1]));
    }
}

QNetwork QNetwork::random(std::vector<int> layer_sizes, Rng& rng)
{
    QNetwork net(std::move(layer_sizes));
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(net.sizes_[l]));
        auto draw = [&] { return (2.0 * uniform01(rng) - 1.0) * bound; };
        Eigen::MatrixXd& w = net.weights[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = draw();
            }
        }
        for (Eigen::Index r = 0; r < net.biases[l].size(); ++r) {
            net.biases[l](r) = draw();
        }
    }
    return net;
}

std::size_t QNetwork::parameter_count() const
{
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
    }
    return n;
}

Eigen::VectorXd QNetwork::forward(std::span<const double> input) const
{
    if (static_cast<int>(input.size()) != input_size()) {
        throw ContractViolation("QNetwork::forward: observation length " +
                                std::to_string(input.size()) + " does not match input size " +
                                std::to_string(input_size()));
    }
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(input.data(),
                                                           static_cast<Eigen::Index>(input.size()));
    for (std::size_t l = 0; l < weights.size(); ++l) {
        Eigen::VectorXd z = weights[l] * a + biases[l];
        a = (l + 1 < weights.size()) ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
    }
    return a;
}

Eigen::MatrixXd QNetwork::forward_batch(const Eigen::MatrixXd& inputs) const
{
    if (inputs.rows() != input_size()) {
        throw ContractViolation("QNetwork::forward_batch: input rows do not match input size");
    }
    Eigen::MatrixXd a = inputs;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        Eigen::MatrixXd z = weights[l] * a;
        z.colwise() += biases[l];
        a = (l + 1 < weights.size()) ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
    }
    return a;
}

double QNetwork::squared_error(const Eigen::MatrixXd& inputs, std::span<const int> actions,
                               std::span<const double> targets, NetworkGradients* grad) const
{
    const Eigen::Index batch = inputs.cols();
    if (batch == 0 || static_cast<Eigen::Index>(actions.size()) != batch ||
        static_cast<Eigen::Index>(targets.size()) != batch) {
        throw ContractViolation("squared_error: batch, actions and targets must agree in size");
    }
    if (inputs.rows() != input_size()) {
        throw ContractViolation("squared_error: input rows do not match input size");
    }
    const std::size_t layers = weights.size();
    // activations[0] = input, activations[l+1] = output of layer l
    std::vector<Eigen::MatrixXd> activations;
    activations.reserve(layers + 1);
    activations.push_back(inputs);
    for (std::size_t l = 0; l < layers; ++l) {
        Eigen::MatrixXd z = weights[l] * activations.back();
        z.colwise() += biases[l];
        if (l + 1 < layers) {
            z = z.cwiseMax(0.0);
        }
        activations.push_back(std::move(z));
    }

    const Eigen::MatrixXd& q = activations.back();
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(q.rows(), batch);
    double loss = 0.0;
    const double inv_batch = 1.0 / static_cast<double>(batch);
    for (Eigen::Index i = 0; i < batch; ++i) {
        const int a = actions[static_cast<std::size_t>(i)];
        if (a < 0 || a >= q.rows()) {
            throw ContractViolation("squared_error: action index out of range");
        }
        const double err = q(a, i) - targets[static_cast<std::size_t>(i)];
        loss += err * err;
        delta(a, i) = 2.0 * err * inv_batch;
    }
    loss *= inv_batch;
    if (grad == nullptr) {
        return loss;
    }

    grad->weights.resize(layers);
    grad->biases.resize(layers);
    for (std::size_t l = layers; l-- > 0;) {
        grad->weights[l] = delta * activations[l].transpose();
        grad->biases[l] = delta.rowwise().sum();
        if (l > 0) {
            Eigen::MatrixXd back = weights[l].transpose() * delta;
            // Rectifier derivative; a hidden activation of exactly 0 passes no gradient.
            delta = back.cwiseProduct((activations[l].array() > 0.0).cast<double>().matrix());
        }
    }
    return loss;
}

void QNetwork::apply_sgd(const NetworkGradients& grad, double learning_rate)
{
    for (std::size_t l = 0; l < weights.size(); ++l) {
        weights[l] -= learning_rate * grad.weights[l];
        biases[l] -= learning_rate * grad.biases[l];
    }
}

std::vector<double> QNetwork::flat_parameters() const
{
    std::vector<double> out;
    out.reserve(parameter_count());
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
            for (Eigen::Index c = 0; c < weights[l].cols(); ++c) {
                out.push_back(weights[l](r, c));
            }
        }
        for (Eigen::Index r = 0; r < biases[l].size(); ++r) {
            out.push_back(biases[l](r));
        }
    }
    return out;
}

void QNetwork::set_flat_parameters(std::span<const double> values)
{
    if (values.size() != parameter_count()) {
        throw ContractViolation("set_flat_parameters: wrong parameter count");
    }
    std::size_t k = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
            for (Eigen::Index c = 0; c < weights[l].cols(); ++c) {
                weights[l](r, c) = values[k++];
            }
        }
        for (Eigen::Index r = 0; r < biases[l].size(); ++r) {
            biases[l](r) = values[k++];
        }
    }
}

bool operator==(const QNetwork& a, const QNetwork& b)
{
    return a.sizes_ == b.sizes_ && a.flat_parameters() == b.flat_parameters();
}

}  // namespace rarl
