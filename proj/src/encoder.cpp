#include "reks/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "reks/errors.hpp"

namespace reks {

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& v) {
    return v.unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
}

}  // namespace

Eigen::VectorXd SessionEncoder::forward(const std::vector<std::uint32_t>& items,
                                        const EmbeddingTable& table, bool training,
                                        std::mt19937_64& rng, EncoderCache& cache) const {
    if (items.empty()) throw DataError("cannot encode an empty session");
    const auto len = static_cast<Eigen::Index>(items.size());
    const auto d0 = static_cast<Eigen::Index>(input_dim());
    cache = EncoderCache{};
    cache.len = items.size();
    cache.inputs.resize(len, d0);
    for (Eigen::Index t = 0; t < len; ++t) {
        cache.inputs.row(t) = table.entity(items[static_cast<std::size_t>(t)]);
    }
    if (training && dropout_ > 0.0) {
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        const double keep = 1.0 - dropout_;
        cache.mask.resize(len, d0);
        for (Eigen::Index t = 0; t < len; ++t) {
            for (Eigen::Index j = 0; j < d0; ++j) {
                cache.mask(t, j) = uniform(rng) < keep ? 1.0 / keep : 0.0;
            }
        }
        cache.inputs = cache.inputs.cwiseProduct(cache.mask);
    }
    return run(cache);
}

void SessionEncoder::zero_grad() {
    for (auto& view : param_views()) {
        std::fill(view.grad, view.grad + view.size, 0.0);
    }
}

MeanPoolEncoder::MeanPoolEncoder(std::size_t dim, double dropout)
    : SessionEncoder(dropout), dim_(dim) {
    if (dim == 0) throw ConfigError("encoder dimension must be positive");
}

Eigen::VectorXd MeanPoolEncoder::run(EncoderCache& cache) const {
    return cache.inputs.colwise().mean().transpose();
}

RowMatrixXd MeanPoolEncoder::backward(const EncoderCache& cache,
                                      const Eigen::VectorXd& upstream) {
    if (cache.len == 0) throw DataError("backward without a cached forward pass");
    RowMatrixXd dx(cache.inputs.rows(), cache.inputs.cols());
    const Eigen::RowVectorXd per_item =
        upstream.transpose() / static_cast<double>(cache.len);
    for (Eigen::Index t = 0; t < dx.rows(); ++t) dx.row(t) = per_item;
    if (cache.mask.size() > 0) dx = dx.cwiseProduct(cache.mask);
    return dx;
}

Eigen::VectorXd gru_step(const Eigen::VectorXd& x, const Eigen::VectorXd& h,
                         const GruParams& p) {
    if (x.size() != p.Wz.cols() || h.size() != p.Uz.cols()) {
        throw DataError("gru_step shape mismatch");
    }
    const Eigen::VectorXd z = sigmoid(p.Wz * x + p.Uz * h + p.bz);
    const Eigen::VectorXd r = sigmoid(p.Wr * x + p.Ur * h + p.br);
    const Eigen::VectorXd hbar = (p.Wh * x + p.Uh * r.cwiseProduct(h) + p.bh).array().tanh();
    return (1.0 - z.array()) * h.array() + z.array() * hbar.array();
}

GruEncoder::GruEncoder(std::size_t input_dim, std::size_t hidden_dim, double dropout,
                       std::uint64_t seed)
    : SessionEncoder(dropout), d0_(input_dim), d1_(hidden_dim) {
    if (input_dim == 0 || hidden_dim == 0) {
        throw ConfigError("encoder dimensions must be positive");
    }
    if (dropout < 0.0 || dropout >= 1.0) {
        throw ConfigError("dropout must lie in [0, 1)");
    }
    const auto di = static_cast<Eigen::Index>(input_dim);
    const auto dh = static_cast<Eigen::Index>(hidden_dim);
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-bound, bound);
    auto fill = [&](auto& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = uniform(rng);
        }
    };
    p_.Wz.resize(dh, di); p_.Wr.resize(dh, di); p_.Wh.resize(dh, di);
    p_.Uz.resize(dh, dh); p_.Ur.resize(dh, dh); p_.Uh.resize(dh, dh);
    fill(p_.Wz); fill(p_.Wr); fill(p_.Wh);
    fill(p_.Uz); fill(p_.Ur); fill(p_.Uh);
    p_.bz = Eigen::VectorXd::Zero(dh);
    p_.br = Eigen::VectorXd::Zero(dh);
    p_.bh = Eigen::VectorXd::Zero(dh);

    g_.Wz = RowMatrixXd::Zero(dh, di); g_.Wr = RowMatrixXd::Zero(dh, di);
    g_.Wh = RowMatrixXd::Zero(dh, di);
    g_.Uz = RowMatrixXd::Zero(dh, dh); g_.Ur = RowMatrixXd::Zero(dh, dh);
    g_.Uh = RowMatrixXd::Zero(dh, dh);
    g_.bz = Eigen::VectorXd::Zero(dh);
    g_.br = Eigen::VectorXd::Zero(dh);
    g_.bh = Eigen::VectorXd::Zero(dh);
}

Eigen::VectorXd GruEncoder::run(EncoderCache& cache) const {
    const auto len = static_cast<Eigen::Index>(cache.len);
    const auto dh = static_cast<Eigen::Index>(d1_);
    cache.h.resize(len, dh);
    cache.z.resize(len, dh);
    cache.r.resize(len, dh);
    cache.hbar.resize(len, dh);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(dh);
    for (Eigen::Index t = 0; t < len; ++t) {
        const Eigen::VectorXd x = cache.inputs.row(t).transpose();
        const Eigen::VectorXd z = sigmoid(p_.Wz * x + p_.Uz * h + p_.bz);
        const Eigen::VectorXd r = sigmoid(p_.Wr * x + p_.Ur * h + p_.br);
        const Eigen::VectorXd hbar =
            (p_.Wh * x + p_.Uh * r.cwiseProduct(h) + p_.bh).array().tanh();
        h = ((1.0 - z.array()) * h.array() + z.array() * hbar.array()).matrix();
        cache.z.row(t) = z.transpose();
        cache.r.row(t) = r.transpose();
        cache.hbar.row(t) = hbar.transpose();
        cache.h.row(t) = h.transpose();
    }
    return h;
}

RowMatrixXd GruEncoder::backward(const EncoderCache& cache, const Eigen::VectorXd& upstream) {
    if (cache.len == 0) throw DataError("backward without a cached forward pass");
    const auto len = static_cast<Eigen::Index>(cache.len);
    RowMatrixXd dx(len, static_cast<Eigen::Index>(d0_));
    Eigen::VectorXd dh = upstream;
    for (Eigen::Index t = len - 1; t >= 0; --t) {
        const Eigen::VectorXd x = cache.inputs.row(t).transpose();
        const Eigen::VectorXd z = cache.z.row(t).transpose();
        const Eigen::VectorXd r = cache.r.row(t).transpose();
        const Eigen::VectorXd hbar = cache.hbar.row(t).transpose();
        const Eigen::VectorXd h_prev = t > 0
                                           ? Eigen::VectorXd(cache.h.row(t - 1).transpose())
                                           : Eigen::VectorXd::Zero(dh.size());

        const Eigen::VectorXd dz = dh.cwiseProduct(hbar - h_prev);
        const Eigen::VectorXd dhbar = dh.cwiseProduct(z);
        Eigen::VectorXd dh_next = dh.cwiseProduct(Eigen::VectorXd::Ones(dh.size()) - z);

        // candidate gate: hbar = tanh(Wh x + Uh (r o h_prev) + bh)
        const Eigen::VectorXd dah =
            dhbar.cwiseProduct((1.0 - hbar.array().square()).matrix());
        g_.Wh += dah * x.transpose();
        g_.Uh += dah * r.cwiseProduct(h_prev).transpose();
        g_.bh += dah;
        const Eigen::VectorXd drh = p_.Uh.transpose() * dah;
        const Eigen::VectorXd dr = drh.cwiseProduct(h_prev);
        dh_next += drh.cwiseProduct(r);

        // update gate
        const Eigen::VectorXd daz =
            dz.cwiseProduct(z.cwiseProduct((1.0 - z.array()).matrix()));
        g_.Wz += daz * x.transpose();
        g_.Uz += daz * h_prev.transpose();
        g_.bz += daz;
        dh_next += p_.Uz.transpose() * daz;

        // reset gate
        const Eigen::VectorXd dar =
            dr.cwiseProduct(r.cwiseProduct((1.0 - r.array()).matrix()));
        g_.Wr += dar * x.transpose();
        g_.Ur += dar * h_prev.transpose();
        g_.br += dar;
        dh_next += p_.Ur.transpose() * dar;

        dx.row(t) = (p_.Wz.transpose() * daz + p_.Wr.transpose() * dar +
                     p_.Wh.transpose() * dah)
                        .transpose();
        dh = dh_next;
    }
    if (cache.mask.size() > 0) dx = dx.cwiseProduct(cache.mask);
    return dx;
}

std::vector<ParamView> GruEncoder::param_views() {
    auto view = [](const char* name, auto& value, auto& grad) {
        return ParamView{name, value.data(), grad.data(),
                         static_cast<std::size_t>(value.size())};
    };
    return {
        view("gru.Wz", p_.Wz, g_.Wz), view("gru.Uz", p_.Uz, g_.Uz),
        view("gru.bz", p_.bz, g_.bz), view("gru.Wr", p_.Wr, g_.Wr),
        view("gru.Ur", p_.Ur, g_.Ur), view("gru.br", p_.br, g_.br),
        view("gru.Wh", p_.Wh, g_.Wh), view("gru.Uh", p_.Uh, g_.Uh),
        view("gru.bh", p_.bh, g_.bh),
    };
}

std::optional<EncoderKind> encoder_kind_from_string(std::string_view s) {
    if (s == "mean") return EncoderKind::mean_pool;
    if (s == "gru") return EncoderKind::gru;
    return std::nullopt;
}

std::string_view to_string(EncoderKind k) {
    return k == EncoderKind::mean_pool ? "mean" : "gru";
}

std::unique_ptr<SessionEncoder> make_encoder(EncoderKind kind, std::size_t input_dim,
                                             std::size_t output_dim, double dropout,
                                             std::uint64_t seed) {
    switch (kind) {
        case EncoderKind::mean_pool:
            if (input_dim != output_dim) {
                throw ConfigError("mean-pool encoder requires equal input/output dims");
            }
            return std::make_unique<MeanPoolEncoder>(input_dim, dropout);
        case EncoderKind::gru:
            return std::make_unique<GruEncoder>(input_dim, output_dim, dropout, seed);
    }
    throw ConfigError("unknown encoder kind");
}

}  // namespace reks
