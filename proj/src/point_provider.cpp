#include "qkr/provider.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace qkr {

namespace {

struct GeneratedTerm {
    std::array<const char*, kCycDegree> weight;
    std::vector<std::pair<int, int>> probes;
};

struct GeneratedKey {
    const char* type;
    std::vector<GeneratedTerm> terms;
};

#include "generated/point_tables.inc"

std::shared_ptr<const FunctionalProvider> build() {
    auto p = std::make_shared<FunctionalProvider>("builtin-point");
    for (const auto& key : kGeneratedPointKeys) {
        CycleType type = CycleType::parse(key.type);
        Functional f;
        for (const auto& t : key.terms) {
            std::vector<Series> comps;
            for (const char* w : t.weight) comps.emplace_back(parse_rational(w));
            f.push_back({Cyc::from_components(std::move(comps)), t.probes});
        }
        p->add(RawKey{0, type, std::vector<int>(type.cycles(), 0)}, std::move(f));
    }
    return p;
}

}  // namespace

std::shared_ptr<const FunctionalProvider> builtin_point_provider() {
    static const auto provider = build();
    return provider;
}

}  // namespace qkr
