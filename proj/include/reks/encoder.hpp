#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "reks/embedding.hpp"

namespace reks {

/// Flat view over one named parameter tensor and its gradient buffer.
struct ParamView {
    std::string name;
    double* value = nullptr;
    double* grad = nullptr;
    std::size_t size = 0;
};

/// Activations recorded by forward() and consumed by backward(). One cache
/// per outstanding forward pass, owned by the caller.
struct EncoderCache {
    RowMatrixXd inputs;            // L × d0, after dropout scaling
    RowMatrixXd mask;              // L × d0 inverted-dropout factors; empty when unused
    RowMatrixXd h, z, r, hbar;     // L × d1 per-step activations (GRU only)
    std::size_t len = 0;
};

/// Session-prefix encoder producing the session vector; exact reverse-mode
/// gradients for all parameters and for the item-embedding inputs.
class SessionEncoder {
public:
    virtual ~SessionEncoder() = default;

    virtual std::size_t input_dim() const = 0;
    virtual std::size_t output_dim() const = 0;

    /// items: embedding-row indices of the session prefix, oldest first.
    /// Inverted dropout is applied to input rows only when training.
    Eigen::VectorXd forward(const std::vector<std::uint32_t>& items,
                            const EmbeddingTable& table, bool training,
                            std::mt19937_64& rng, EncoderCache& cache) const;

    /// Accumulates parameter gradients for d(loss)/d(output) = upstream and
    /// returns d(loss)/d(input rows), dropout already accounted for.
    virtual RowMatrixXd backward(const EncoderCache& cache,
                                 const Eigen::VectorXd& upstream) = 0;

    virtual std::vector<ParamView> param_views() = 0;
    void zero_grad();

protected:
    explicit SessionEncoder(double dropout) : dropout_(dropout) {}
    virtual Eigen::VectorXd run(EncoderCache& cache) const = 0;

    double dropout_ = 0.0;
};

/// Arithmetic mean of the item rows; parameter-free, output dim = input dim.
class MeanPoolEncoder final : public SessionEncoder {
public:
    explicit MeanPoolEncoder(std::size_t dim, double dropout = 0.0);

    std::size_t input_dim() const override { return dim_; }
    std::size_t output_dim() const override { return dim_; }
    RowMatrixXd backward(const EncoderCache& cache, const Eigen::VectorXd& upstream) override;
    std::vector<ParamView> param_views() override { return {}; }

private:
    Eigen::VectorXd run(EncoderCache& cache) const override;
    std::size_t dim_;
};

struct GruParams {
    RowMatrixXd Wz, Wr, Wh;      // d1 × d0
    RowMatrixXd Uz, Ur, Uh;      // d1 × d1
    Eigen::VectorXd bz, br, bh;  // d1
};

/// z = sigmoid(Wz x + Uz h + bz); r = sigmoid(Wr x + Ur h + br);
/// hbar = tanh(Wh x + Uh (r o h) + bh); h' = (1-z) o h + z o hbar.
Eigen::VectorXd gru_step(const Eigen::VectorXd& x, const Eigen::VectorXd& h,
                         const GruParams& p);

/// Final hidden state of a GRU over the prefix, zero initial hidden state.
class GruEncoder final : public SessionEncoder {
public:
    GruEncoder(std::size_t input_dim, std::size_t hidden_dim, double dropout,
               std::uint64_t seed);

    std::size_t input_dim() const override { return d0_; }
    std::size_t output_dim() const override { return d1_; }
    RowMatrixXd backward(const EncoderCache& cache, const Eigen::VectorXd& upstream) override;
    std::vector<ParamView> param_views() override;

    GruParams& params() { return p_; }
    const GruParams& params() const { return p_; }

private:
    Eigen::VectorXd run(EncoderCache& cache) const override;

    std::size_t d0_, d1_;
    GruParams p_;
    GruParams g_;  // gradient accumulators, same shapes
};

enum class EncoderKind { mean_pool, gru };

std::optional<EncoderKind> encoder_kind_from_string(std::string_view s);
std::string_view to_string(EncoderKind k);

std::unique_ptr<SessionEncoder> make_encoder(EncoderKind kind, std::size_t input_dim,
                                             std::size_t output_dim, double dropout,
                                             std::uint64_t seed);

}  // namespace reks
