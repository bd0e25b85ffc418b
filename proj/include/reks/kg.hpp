#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "reks/ids.hpp"
#include "reks/ingest.hpp"

namespace reks {

struct Triple {
    EntityId head;
    Relation relation = Relation::purchase;
    EntityId tail;

    friend bool operator==(const Triple&, const Triple&) = default;
};

/// A labeled out-edge, ordered by (relation index, tail index).
struct Edge {
    Relation relation = Relation::purchase;
    EntityId tail;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Typed knowledge graph over dense entity ids, immutable once frozen.
/// Non-co_occur triples are stored in both directions; co_occur stays directed.
class KnowledgeGraph {
public:
    EntityId intern(EntityKind kind, const std::string& raw_id);
    std::optional<EntityId> find(EntityKind kind, const std::string& raw_id) const;
    bool has_entity(EntityId e) const { return e.index < entities_.size(); }

    /// Inserts (head, relation, tail); duplicates collapse to one edge.
    void add_edge(EntityId head, Relation relation, EntityId tail);

    /// Sorts and dedups edges, builds the adjacency index. Add no edges after.
    void freeze();
    bool frozen() const { return frozen_; }

    std::size_t num_entities() const { return entities_.size(); }
    std::size_t num_triples() const;

    EntityKind kind_of(std::uint32_t index) const { return entities_[index].kind; }
    EntityKind kind_of(EntityId e) const { return kind_of(e.index); }
    const std::string& raw_id_of(EntityId e) const { return entities_[e.index].raw; }
    /// The full EntityId (with kind) for a known dense index.
    EntityId entity_at(std::uint32_t index) const { return EntityId{index, kind_of(index)}; }

    /// Out-neighborhood of `entity` minus visited tails, in (relation, tail) order.
    /// Throws DataError for an unknown entity. Requires freeze().
    std::vector<Edge> neighbors(EntityId entity,
                                const std::unordered_set<std::uint32_t>& visited) const;
    std::vector<Edge> neighbors(EntityId entity) const;

    std::size_t out_degree(EntityId entity) const;
    bool has_triple(EntityId head, Relation relation, EntityId tail) const;

    /// All triples in (head, relation, tail) order. Requires freeze().
    const std::vector<Triple>& triples() const;

    std::vector<std::size_t> relation_counts() const;  // indexed by Relation
    std::vector<std::size_t> kind_counts() const;      // indexed by EntityKind

    /// Entities file: `index<TAB>kind:raw_id` in index order, so a reloaded
    /// graph assigns identical indices (embedding rows stay aligned).
    /// Triples file: `head_kind:head_id<TAB>relation<TAB>tail_kind:tail_id`.
    void save(const std::string& entities_path, const std::string& triples_path) const;
    static KnowledgeGraph load(const std::string& entities_path,
                               const std::string& triples_path);

    std::string stats_json() const;

private:
    struct EntityRecord {
        EntityKind kind;
        std::string raw;
    };

    std::vector<EntityRecord> entities_;
    std::array<std::unordered_map<std::string, std::uint32_t>, kNumEntityKinds> by_raw_;
    std::vector<Triple> triples_;
    std::vector<std::size_t> adj_offsets_;  // CSR over heads, built by freeze()
    bool frozen_ = false;
};

struct BuildGraphOptions {
    bool user_info = true;  // when false, user entities and purchase edges are omitted
};

/// Builds the graph from training sessions plus metadata for the retained
/// vocabulary. Session items must be vocabulary members; related-product ids
/// from metadata lists are interned as related_product entities regardless.
KnowledgeGraph build_graph(const std::vector<Session>& train_sessions,
                           const std::vector<ItemMetadata>& metadata,
                           const std::unordered_set<std::string>& vocabulary,
                           const BuildGraphOptions& opts = {});

}  // namespace reks
