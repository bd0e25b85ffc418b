#include "reks/kg.hpp"

#include <algorithm>
#include <fstream>
#include <utility>

#include <json.hpp>

#include "reks/errors.hpp"

namespace reks {

EntityId KnowledgeGraph::intern(EntityKind kind, const std::string& raw_id) {
    if (frozen_) throw DataError("cannot intern entities into a frozen graph");
    if (raw_id.empty()) throw DataError("empty entity id");
    auto& table = by_raw_[static_cast<std::size_t>(kind)];
    auto it = table.find(raw_id);
    if (it != table.end()) return EntityId{it->second, kind};
    const auto index = static_cast<std::uint32_t>(entities_.size());
    entities_.push_back(EntityRecord{kind, raw_id});
    table.emplace(raw_id, index);
    return EntityId{index, kind};
}

std::optional<EntityId> KnowledgeGraph::find(EntityKind kind, const std::string& raw_id) const {
    const auto& table = by_raw_[static_cast<std::size_t>(kind)];
    auto it = table.find(raw_id);
    if (it == table.end()) return std::nullopt;
    return EntityId{it->second, kind};
}

void KnowledgeGraph::add_edge(EntityId head, Relation relation, EntityId tail) {
    if (frozen_) throw DataError("cannot add edges to a frozen graph");
    if (!has_entity(head) || !has_entity(tail)) throw DataError("edge references unknown entity");
    triples_.push_back(Triple{head, relation, tail});
    if (relation != Relation::co_occur) {
        triples_.push_back(Triple{tail, relation, head});
    }
}

namespace {

bool triple_less(const Triple& a, const Triple& b) {
    if (a.head.index != b.head.index) return a.head.index < b.head.index;
    if (a.relation != b.relation) return index_of(a.relation) < index_of(b.relation);
    return a.tail.index < b.tail.index;
}

bool triple_eq(const Triple& a, const Triple& b) {
    return a.head.index == b.head.index && a.relation == b.relation &&
           a.tail.index == b.tail.index;
}

}  // namespace

void KnowledgeGraph::freeze() {
    if (frozen_) return;
    std::sort(triples_.begin(), triples_.end(), triple_less);
    triples_.erase(std::unique(triples_.begin(), triples_.end(), triple_eq), triples_.end());
    adj_offsets_.assign(entities_.size() + 1, 0);
    for (const auto& t : triples_) adj_offsets_[t.head.index + 1]++;
    for (std::size_t i = 1; i < adj_offsets_.size(); ++i) adj_offsets_[i] += adj_offsets_[i - 1];
    frozen_ = true;
}

std::size_t KnowledgeGraph::num_triples() const { return triples_.size(); }

std::vector<Edge> KnowledgeGraph::neighbors(
    EntityId entity, const std::unordered_set<std::uint32_t>& visited) const {
    if (!frozen_) throw DataError("graph must be frozen before neighbor queries");
    if (!has_entity(entity)) throw DataError("neighbor query for unknown entity");
    std::vector<Edge> out;
    const std::size_t begin = adj_offsets_[entity.index];
    const std::size_t end = adj_offsets_[entity.index + 1];
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        const Triple& t = triples_[i];
        if (visited.count(t.tail.index) > 0) continue;
        out.push_back(Edge{t.relation, t.tail});
    }
    return out;
}

std::vector<Edge> KnowledgeGraph::neighbors(EntityId entity) const {
    static const std::unordered_set<std::uint32_t> kNone;
    return neighbors(entity, kNone);
}

std::size_t KnowledgeGraph::out_degree(EntityId entity) const {
    if (!frozen_) throw DataError("graph must be frozen before degree queries");
    if (!has_entity(entity)) throw DataError("degree query for unknown entity");
    return adj_offsets_[entity.index + 1] - adj_offsets_[entity.index];
}

bool KnowledgeGraph::has_triple(EntityId head, Relation relation, EntityId tail) const {
    if (!frozen_) throw DataError("graph must be frozen before triple queries");
    if (!has_entity(head) || !has_entity(tail)) return false;
    const Triple probe{head, relation, tail};
    const auto begin = triples_.begin() + static_cast<std::ptrdiff_t>(adj_offsets_[head.index]);
    const auto end = triples_.begin() + static_cast<std::ptrdiff_t>(adj_offsets_[head.index + 1]);
    return std::binary_search(begin, end, probe, triple_less);
}

const std::vector<Triple>& KnowledgeGraph::triples() const {
    if (!frozen_) throw DataError("graph must be frozen before triple enumeration");
    return triples_;
}

std::vector<std::size_t> KnowledgeGraph::relation_counts() const {
    std::vector<std::size_t> counts(kNumRelations, 0);
    for (const auto& t : triples_) counts[index_of(t.relation)]++;
    return counts;
}

std::vector<std::size_t> KnowledgeGraph::kind_counts() const {
    std::vector<std::size_t> counts(kNumEntityKinds, 0);
    for (const auto& rec : entities_) counts[static_cast<std::size_t>(rec.kind)]++;
    return counts;
}

namespace {

std::string entity_token(const KnowledgeGraph& g, EntityId e) {
    const std::string& raw = g.raw_id_of(e);
    if (raw.find('\t') != std::string::npos || raw.find('\n') != std::string::npos) {
        throw DataError("entity id contains tab or newline: cannot serialize");
    }
    return std::string(to_string(g.kind_of(e))) + ":" + raw;
}

std::pair<EntityKind, std::string> split_entity_token(const std::string& token,
                                                      std::size_t line) {
    const auto colon = token.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= token.size()) {
        throw ParseError("malformed entity token '" + token + "'", line);
    }
    const auto kind = entity_kind_from_string(token.substr(0, colon));
    if (!kind) throw ParseError("unknown entity kind in token '" + token + "'", line);
    return {*kind, token.substr(colon + 1)};
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return fields;
}

}  // namespace

void KnowledgeGraph::save(const std::string& entities_path,
                          const std::string& triples_path) const {
    if (!frozen_) throw DataError("graph must be frozen before serialization");
    std::ofstream ents(entities_path);
    if (!ents) throw DataError("cannot open '" + entities_path + "' for writing");
    for (std::size_t i = 0; i < entities_.size(); ++i) {
        ents << i << '\t' << entity_token(*this, EntityId{static_cast<std::uint32_t>(i),
                                                          entities_[i].kind})
             << '\n';
    }
    if (!ents) throw DataError("write failed for '" + entities_path + "'");

    std::ofstream out(triples_path);
    if (!out) throw DataError("cannot open '" + triples_path + "' for writing");
    for (const auto& t : triples_) {
        out << entity_token(*this, t.head) << '\t' << to_string(t.relation) << '\t'
            << entity_token(*this, t.tail) << '\n';
    }
    if (!out) throw DataError("write failed for '" + triples_path + "'");
}

KnowledgeGraph KnowledgeGraph::load(const std::string& entities_path,
                                    const std::string& triples_path) {
    KnowledgeGraph g;

    std::ifstream ents(entities_path);
    if (!ents) throw DataError("cannot open '" + entities_path + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ents, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 2) {
            throw ParseError("expected 2 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        const auto [kind, raw] = split_entity_token(fields[1], line_no);
        const EntityId id = g.intern(kind, raw);
        if (std::to_string(id.index) != fields[0]) {
            throw ParseError("entity index mismatch: expected " + std::to_string(id.index) +
                                 ", file says " + fields[0],
                             line_no);
        }
    }

    std::ifstream in(triples_path);
    if (!in) throw DataError("cannot open '" + triples_path + "'");
    line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 3) {
            throw ParseError("expected 3 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        const auto [hk, hraw] = split_entity_token(fields[0], line_no);
        const auto head = g.find(hk, hraw);
        if (!head) throw ParseError("triple references unlisted entity '" + fields[0] + "'",
                                    line_no);
        const auto rel = relation_from_string(fields[1]);
        if (!rel) throw ParseError("unknown relation '" + fields[1] + "'", line_no);
        const auto [tk, traw] = split_entity_token(fields[2], line_no);
        const auto tail = g.find(tk, traw);
        if (!tail) throw ParseError("triple references unlisted entity '" + fields[2] + "'",
                                    line_no);
        // The file stores each direction explicitly; insert as-is and let
        // freeze() collapse duplicates.
        g.triples_.push_back(Triple{*head, *rel, *tail});
    }
    g.freeze();
    return g;
}

std::string KnowledgeGraph::stats_json() const {
    nlohmann::ordered_json j;
    j["entities"] = num_entities();
    j["triples"] = num_triples();
    nlohmann::ordered_json kinds;
    const auto kc = kind_counts();
    for (std::size_t k = 0; k < kNumEntityKinds; ++k) {
        kinds[std::string(kEntityKindNames[k])] = kc[k];
    }
    j["entity_kinds"] = kinds;
    nlohmann::ordered_json rels;
    const auto rc = relation_counts();
    for (std::size_t r = 0; r < kNumRelations; ++r) {
        rels[std::string(kRelationNames[r])] = rc[r];
    }
    j["relations"] = rels;
    return j.dump(2);
}

KnowledgeGraph build_graph(const std::vector<Session>& train_sessions,
                           const std::vector<ItemMetadata>& metadata,
                           const std::unordered_set<std::string>& vocabulary,
                           const BuildGraphOptions& opts) {
    KnowledgeGraph g;

    auto product = [&](const std::string& raw) { return g.intern(EntityKind::product, raw); };

    // Session-derived entities and edges.
    for (const auto& s : train_sessions) {
        std::vector<std::string> sequence = s.items;
        sequence.push_back(s.target);
        for (const auto& item : sequence) {
            if (vocabulary.count(item) == 0) {
                throw DataError("session item '" + item + "' is not in the item vocabulary");
            }
        }
        std::optional<EntityId> user;
        if (opts.user_info) user = g.intern(EntityKind::user, s.user_id);
        for (std::size_t i = 0; i < sequence.size(); ++i) {
            const EntityId item = product(sequence[i]);
            if (user) g.add_edge(*user, Relation::purchase, item);
            if (i + 1 < sequence.size() && sequence[i] != sequence[i + 1]) {
                g.add_edge(item, Relation::co_occur, product(sequence[i + 1]));
            }
        }
    }

    // Metadata edges for retained items only; related ids keep their own
    // entity kind even when the same raw string also names a product.
    for (const auto& m : metadata) {
        if (vocabulary.count(m.item_id) == 0) continue;
        const EntityId item = product(m.item_id);
        if (!m.brand.empty()) {
            g.add_edge(item, Relation::produced_by, g.intern(EntityKind::brand, m.brand));
        }
        for (const auto& c : m.categories) {
            g.add_edge(item, Relation::belong_to, g.intern(EntityKind::category, c));
        }
        auto related = [&](const std::vector<std::string>& ids, Relation rel) {
            for (const auto& rid : ids) {
                g.add_edge(item, rel, g.intern(EntityKind::related_product, rid));
            }
        };
        related(m.also_bought, Relation::also_bought);
        related(m.also_viewed, Relation::also_viewed);
        related(m.bought_together, Relation::bought_together);
    }

    g.freeze();
    return g;
}

}  // namespace reks
