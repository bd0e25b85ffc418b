#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "reks/ids.hpp"

namespace reks {

/// Row-major so each embedding row is contiguous, matching the on-disk layout.
using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One row per entity followed by one row per relation; row index = dense
/// entity index, relation r lives at row num_entities + index_of(r).
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    EmbeddingTable(std::size_t num_entities, std::size_t dim);

    std::size_t num_entities() const { return num_entities_; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.cols()); }
    std::size_t rows() const { return static_cast<std::size_t>(m_.rows()); }

    std::size_t relation_row(Relation r) const { return num_entities_ + index_of(r); }

    Eigen::Ref<const Eigen::RowVectorXd> entity(std::uint32_t index) const;
    Eigen::Ref<const Eigen::RowVectorXd> entity(EntityId e) const { return entity(e.index); }
    Eigen::Ref<const Eigen::RowVectorXd> relation(Relation r) const;
    Eigen::Ref<Eigen::RowVectorXd> entity(std::uint32_t index);
    Eigen::Ref<Eigen::RowVectorXd> relation(Relation r);

    RowMatrixXd& matrix() { return m_; }
    const RowMatrixXd& matrix() const { return m_; }

    /// One-line JSON header {"rows","cols","seed","fingerprint"} followed by
    /// the matrix as little-endian float32, row-major.
    void save(const std::string& path, std::uint64_t seed,
              const std::string& fingerprint) const;
    static EmbeddingTable load(const std::string& path, std::size_t num_entities);

private:
    RowMatrixXd m_;
    std::size_t num_entities_ = 0;
};

}  // namespace reks
