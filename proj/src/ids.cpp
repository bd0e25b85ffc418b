#include "reks/ids.hpp"

namespace reks {

std::optional<EntityKind> entity_kind_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kNumEntityKinds; ++i) {
        if (kEntityKindNames[i] == s) return static_cast<EntityKind>(i);
    }
    return std::nullopt;
}

std::optional<Relation> relation_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kNumRelations; ++i) {
        if (kRelationNames[i] == s) return static_cast<Relation>(i);
    }
    return std::nullopt;
}

}  // namespace reks
