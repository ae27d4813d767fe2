#include "qkr/bracket.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>

namespace qkr {

namespace {

struct PlacedPiece {
    int cycle;
    int basis;
    LFunction piece;
    int variable;  // -1 for background
};

struct BackgroundPiece {
    int cycle;
    int basis;
    LFunction piece;
    Cyc coefficient;  // already through Adams of the cycle length
};

bool in_maximal_ideal(const Cyc& c) {
    for (const auto& s : c.components())
        if (s.constant_term() != 0) return false;
    return true;
}

std::vector<BackgroundPiece> background_pieces(const Background& bg, int rank) {
    std::vector<BackgroundPiece> out;
    for (int r = 1; r <= bg.max_cycle(); ++r) {
        const Insertion& ins = bg[r];
        if (static_cast<int>(ins.size()) != rank) throw std::invalid_argument("background insertion has the wrong rank");
        for (int a = 0; a < rank; ++a) {
            for (auto& sp : scalar_pieces(ins[a])) {
                if (!sp.coefficient.is_constant())
                    throw std::invalid_argument("background coefficients must not depend on q");
                Cyc c = sp.coefficient.constant_value();
                if (c.is_zero()) continue;
                if (!in_maximal_ideal(c))
                    throw std::invalid_argument("background insertion must lie in the maximal ideal");
                out.push_back({r, a, std::move(sp.piece), adams_coefficients(r, c)});
            }
        }
    }
    return out;
}

struct ExplicitChoice {
    QFunc coefficient_x = QFunc(1);
    QFunc coefficient_y = QFunc(1);
    std::vector<PlacedPiece> pieces;
};

std::vector<ExplicitChoice> explicit_choices(const std::vector<Slot>& slots, int rank) {
    std::vector<ExplicitChoice> acc(1);
    for (const auto& s : slots) {
        if (static_cast<int>(s.value.size()) != rank) throw std::invalid_argument("slot insertion has the wrong rank");
        if (s.cycle < 1) throw std::invalid_argument("cycle length must be positive");
        std::vector<std::pair<int, ScalarPiece>> pieces;
        for (int a = 0; a < rank; ++a)
            for (auto& sp : scalar_pieces(s.value[a])) pieces.emplace_back(a, std::move(sp));
        std::vector<ExplicitChoice> next;
        for (const auto& base : acc) {
            for (const auto& [a, sp] : pieces) {
                ExplicitChoice c = base;
                QFunc coef = adams_coefficients(s.cycle, sp.coefficient);
                if (s.variable == 1) c.coefficient_y = c.coefficient_y * coef;
                else c.coefficient_x = c.coefficient_x * coef;
                c.pieces.push_back({s.cycle, a, sp.piece, s.variable});
                next.push_back(std::move(c));
            }
        }
        acc = std::move(next);
    }
    return acc;
}

Rational inverse_factorial(int m) {
    Rational f = 1;
    for (int i = 2; i <= m; ++i) f /= i;
    return f;
}

RawKey make_key(int genus, std::vector<PlacedPiece>& pieces) {
    std::stable_sort(pieces.begin(), pieces.end(), [](const PlacedPiece& a, const PlacedPiece& b) { return a.cycle < b.cycle; });
    std::map<int, int> counts;
    RawKey key;
    key.genus = genus;
    for (const auto& p : pieces) {
        ++counts[p.cycle];
        key.basis.push_back(p.basis);
    }
    key.type = CycleType(counts);
    return key;
}

template <class F>
void parallel_for(std::size_t n, F&& body) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical(qkr_bracket_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace

Background zero_background(int max_cycle, int rank) { return Background(max_cycle, Insertion(rank)); }

struct BracketEngine::Leaf {
    Cyc coefficient;
    QFunc coefficient_x;
    QFunc coefficient_y;
    std::vector<PlacedPiece> pieces;
};

BracketEngine::BracketEngine(std::shared_ptr<const CorrelatorProvider> provider, int rank)
    : provider_(std::move(provider)), rank_(rank) {
    if (!provider_) throw std::invalid_argument("engine needs a provider");
    if (rank_ < 1) throw std::invalid_argument("rank must be positive");
}

std::vector<BracketEngine::Leaf> BracketEngine::leaves(const std::vector<Slot>& slots, const Background& background) const {
    auto bg = background_pieces(background, rank_);
    // Multisets of background pieces with weight prod c^m / m!.
    std::vector<std::pair<Cyc, std::vector<int>>> multisets;
    std::vector<int> mult(bg.size(), 0);
    auto recurse = [&](auto&& self, std::size_t i, const Cyc& coef) -> void {
        if (i == bg.size()) {
            multisets.emplace_back(coef, mult);
            return;
        }
        Cyc c = coef;
        for (int m = 0; !c.is_zero(); ++m) {
            mult[i] = m;
            self(self, i + 1, c * Cyc(inverse_factorial(m)));
            c = c * bg[i].coefficient;
        }
        mult[i] = 0;
    };
    recurse(recurse, 0, Cyc(1));

    Rational prefactor = 1;
    for (const auto& s : slots) prefactor *= s.cycle;
    std::vector<Leaf> out;
    for (auto& choice : explicit_choices(slots, rank_)) {
        for (const auto& [coef, m] : multisets) {
            Leaf leaf{coef * Cyc(prefactor), choice.coefficient_x, choice.coefficient_y, choice.pieces};
            for (std::size_t i = 0; i < bg.size(); ++i)
                for (int k = 0; k < m[i]; ++k) leaf.pieces.push_back({bg[i].cycle, bg[i].basis, bg[i].piece, -1});
            out.push_back(std::move(leaf));
        }
    }
    return out;
}

QFunc BracketEngine::bracket(int genus, const std::vector<Slot>& slots, const Background& background) const {
    auto ls = leaves(slots, background);
    std::vector<QFunc> values(ls.size());
    parallel_for(ls.size(), [&](std::size_t i) {
        auto& leaf = ls[i];
        RawKey key = make_key(genus, leaf.pieces);
        std::vector<LFunction> fs;
        for (const auto& p : leaf.pieces) fs.push_back(p.piece);
        QFunc v = provider_->evaluate(key, fs);
        ++evaluations_;
        if (!v.is_zero()) values[i] = v * leaf.coefficient_x * leaf.coefficient_y * leaf.coefficient;
    });
    QFunc total;
    for (const auto& v : values) total += v;
    return total;
}

QFunc BracketEngine::potential(int genus, const Background& t) const { return bracket(genus, {}, t); }

Separable BracketEngine::bracket_separable(int genus, const std::vector<Slot>& slots, const Background& background) const {
    auto ls = leaves(slots, background);
    std::vector<Separable> parts(ls.size());
    parallel_for(ls.size(), [&](std::size_t i) {
        auto& leaf = ls[i];
        RawKey key = make_key(genus, leaf.pieces);
        auto f = provider_->functional(key);
        ++evaluations_;
        if (!f) {
            if (!is_stable(genus, key.type.points())) return;
            throw DataIncomplete(key.canonical());
        }
        std::vector<LFunction> images;
        for (const auto& p : leaf.pieces) images.push_back(adams(p.cycle, p.piece));
        for (const auto& term : *f) {
            QFunc fx = leaf.coefficient_x * term.weight * leaf.coefficient;
            QFunc gy = leaf.coefficient_y;
            for (std::size_t s = 0; s < images.size() && !fx.is_zero() && !gy.is_zero(); ++s) {
                QFunc m = moment(images[s], term.probes[s].first, term.probes[s].second);
                if (leaf.pieces[s].variable == 1) gy = gy * m;
                else fx = fx * m;
            }
            if (!fx.is_zero() && !gy.is_zero()) parts[i].emplace_back(std::move(fx), std::move(gy));
        }
    });
    Separable out;
    for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    return out;
}

}  // namespace qkr
