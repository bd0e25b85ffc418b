#include "reks/embedding.hpp"

#include <fstream>

#include <json.hpp>

#include "reks/errors.hpp"
#include "reks/io.hpp"

namespace reks {

EmbeddingTable::EmbeddingTable(std::size_t num_entities, std::size_t dim)
    : m_(RowMatrixXd::Zero(static_cast<Eigen::Index>(num_entities + kNumRelations),
                           static_cast<Eigen::Index>(dim))),
      num_entities_(num_entities) {
    if (num_entities == 0) throw ConfigError("embedding table needs at least one entity");
    if (dim == 0) throw ConfigError("embedding dimension must be positive");
}

Eigen::Ref<const Eigen::RowVectorXd> EmbeddingTable::entity(std::uint32_t index) const {
    if (index >= num_entities_) throw DataError("entity index out of range");
    return m_.row(static_cast<Eigen::Index>(index));
}

Eigen::Ref<const Eigen::RowVectorXd> EmbeddingTable::relation(Relation r) const {
    return m_.row(static_cast<Eigen::Index>(relation_row(r)));
}

Eigen::Ref<Eigen::RowVectorXd> EmbeddingTable::entity(std::uint32_t index) {
    if (index >= num_entities_) throw DataError("entity index out of range");
    return m_.row(static_cast<Eigen::Index>(index));
}

Eigen::Ref<Eigen::RowVectorXd> EmbeddingTable::relation(Relation r) {
    return m_.row(static_cast<Eigen::Index>(relation_row(r)));
}

void EmbeddingTable::save(const std::string& path, std::uint64_t seed,
                          const std::string& fingerprint) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    nlohmann::ordered_json header;
    header["rows"] = rows();
    header["cols"] = dim();
    header["seed"] = seed;
    header["fingerprint"] = fingerprint;
    out << header.dump() << '\n';
    write_f32(out, m_.data(), static_cast<std::size_t>(m_.size()));
    if (!out) throw DataError("write failed for '" + path + "'");
}

EmbeddingTable EmbeddingTable::load(const std::string& path, std::size_t num_entities) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(read_header_line(in, path));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad embedding header in '" + path + "': " + e.what());
    }
    const auto rows = header.at("rows").get<std::size_t>();
    const auto cols = header.at("cols").get<std::size_t>();
    if (rows != num_entities + kNumRelations) {
        throw DataError("embedding file '" + path + "' has " + std::to_string(rows) +
                        " rows; graph expects " +
                        std::to_string(num_entities + kNumRelations));
    }
    EmbeddingTable table(num_entities, cols);
    read_f32(in, table.m_.data(), static_cast<std::size_t>(table.m_.size()));
    return table;
}

}  // namespace reks
