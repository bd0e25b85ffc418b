#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>

namespace reks {

/// The five entity kinds of the e-commerce knowledge graph.
enum class EntityKind : std::uint8_t {
    user = 0,
    product = 1,
    brand = 2,
    category = 3,
    related_product = 4,
};

inline constexpr std::size_t kNumEntityKinds = 5;

inline constexpr std::array<std::string_view, kNumEntityKinds> kEntityKindNames = {
    "user", "product", "brand", "category", "related_product"};

constexpr std::string_view to_string(EntityKind k) {
    return kEntityKindNames[static_cast<std::size_t>(k)];
}

std::optional<EntityKind> entity_kind_from_string(std::string_view s);

/// The fixed relation vocabulary. co_occur is the only strictly directed one;
/// every other relation is stored with its reverse edge as well.
enum class Relation : std::uint8_t {
    purchase = 0,
    produced_by = 1,
    belong_to = 2,
    also_bought = 3,
    also_viewed = 4,
    bought_together = 5,
    co_occur = 6,
};

inline constexpr std::size_t kNumRelations = 7;

inline constexpr std::array<std::string_view, kNumRelations> kRelationNames = {
    "purchase",    "produced_by",     "belong_to", "also_bought",
    "also_viewed", "bought_together", "co_occur"};

constexpr std::string_view to_string(Relation r) {
    return kRelationNames[static_cast<std::size_t>(r)];
}

constexpr std::uint32_t index_of(Relation r) { return static_cast<std::uint32_t>(r); }

std::optional<Relation> relation_from_string(std::string_view s);

/// Dense entity handle. Indices are unique across all kinds and double as
/// embedding row indices.
struct EntityId {
    std::uint32_t index = 0;
    EntityKind kind = EntityKind::product;

    friend constexpr bool operator==(EntityId a, EntityId b) { return a.index == b.index; }
    friend constexpr auto operator<=>(EntityId a, EntityId b) { return a.index <=> b.index; }
};

constexpr bool is_product(EntityId e) { return e.kind == EntityKind::product; }

}  // namespace reks
