#include "qkr/series.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>
#include <sstream>
#include <unordered_map>

namespace qkr {

namespace {

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto e : m) {
            h ^= e;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

bool add_monomials(const RingContext& ctx, const Monomial& a, const Monomial& b, Monomial& out) {
    const auto& gens = ctx.generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
        int e = int(a[i]) + int(b[i]);
        if (e > 255 || (gens[i].max_exponent >= 0 && e > gens[i].max_exponent))
            return false;
        out[i] = static_cast<std::uint8_t>(e);
    }
    for (std::size_t i = gens.size(); i < kMaxGenerators; ++i) out[i] = 0;
    return true;
}

const Monomial kUnit{};

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw std::invalid_argument("empty rational");
    if (t[0] == '+') t.erase(0, 1);
    Rational r;
    if (r.set_str(t, 10) != 0) throw std::invalid_argument("bad rational: " + text);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

AdamsRule parse_adams_rule(const std::string& text) {
    if (text == "monomial-scaling" || text == "scaling") return AdamsRule::MonomialScaling;
    if (text == "fixed") return AdamsRule::Fixed;
    throw std::invalid_argument("unknown adams rule: " + text);
}

std::string to_string(AdamsRule rule) {
    return rule == AdamsRule::MonomialScaling ? "monomial-scaling" : "fixed";
}

RingContext::RingContext(std::vector<GeneratorSpec> generators, int order)
    : generators_(std::move(generators)), order_(order) {
    if (order_ < 0) throw ContextError("truncation order must be non-negative");
    if (generators_.size() > kMaxGenerators)
        throw ContextError("too many generators (max " + std::to_string(kMaxGenerators) + ")");
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        const auto& g = generators_[i];
        if (g.name.empty()) throw ContextError("generator with empty name");
        if (g.weight < 0) throw ContextError("negative weight for generator " + g.name);
        if (g.weight == 0 && g.max_exponent < 0)
            throw ContextError("weight-0 generator " + g.name + " must have an exponent cap");
        for (std::size_t j = 0; j < i; ++j)
            if (generators_[j].name == g.name) throw ContextError("duplicate generator " + g.name);
    }
}

int RingContext::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < generators_.size(); ++i)
        if (generators_[i].name == name) return static_cast<int>(i);
    return -1;
}

int RingContext::weight(const Monomial& m) const {
    int w = 0;
    for (std::size_t i = 0; i < generators_.size(); ++i) w += int(m[i]) * generators_[i].weight;
    return w;
}

bool RingContext::admissible(const Monomial& m) const {
    if (weight(m) > order_) return false;
    for (std::size_t i = 0; i < generators_.size(); ++i)
        if (generators_[i].max_exponent >= 0 && m[i] > generators_[i].max_exponent) return false;
    return true;
}

bool RingContext::same_as(const RingContext& o) const {
    if (this == &o) return true;
    if (order_ != o.order_ || generators_.size() != o.generators_.size()) return false;
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        const auto& a = generators_[i];
        const auto& b = o.generators_[i];
        if (a.name != b.name || a.weight != b.weight || a.rule != b.rule ||
            a.max_exponent != b.max_exponent)
            return false;
    }
    return true;
}

ContextPtr RingContext::with_order(int order) const {
    return std::make_shared<const RingContext>(generators_, order);
}

ContextPtr RingContext::extended(const std::vector<GeneratorSpec>& extra) const {
    auto gens = generators_;
    gens.insert(gens.end(), extra.begin(), extra.end());
    return std::make_shared<const RingContext>(std::move(gens), order_);
}

ContextPtr make_context(std::vector<GeneratorSpec> generators, int order) {
    return std::make_shared<const RingContext>(std::move(generators), order);
}

Series::Series(const Rational& c) {
    if (c != 0) terms_.emplace_back(kUnit, c);
}

Series::Series(ContextPtr ctx, const Rational& c) : ctx_(std::move(ctx)) {
    if (c != 0) terms_.emplace_back(kUnit, c);
}

Series Series::generator(const ContextPtr& ctx, const std::string& name) {
    int i = ctx->index_of(name);
    if (i < 0) throw ContextError("unknown generator " + name);
    Monomial m{};
    m[i] = 1;
    return monomial(ctx, m, 1);
}

Series Series::monomial(const ContextPtr& ctx, const Monomial& m, const Rational& c) {
    Series s;
    s.ctx_ = ctx;
    if (c != 0 && ctx->admissible(m)) s.terms_.emplace_back(m, c);
    return s;
}

Series Series::from_terms(const ContextPtr& ctx, std::vector<Term> terms) {
    Series s;
    s.ctx_ = ctx;
    s.terms_ = std::move(terms);
    s.canonicalize();
    return s;
}

bool Series::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].first == kUnit);
}

Rational Series::constant_term() const { return coefficient(kUnit); }

Rational Series::coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& k) { return t.first < k; });
    if (it != terms_.end() && it->first == m) return it->second;
    return 0;
}

int Series::weight() const {
    if (terms_.empty()) return kInfiniteWeight;
    if (!ctx_) return 0;
    int w = kInfiniteWeight;
    for (const auto& t : terms_) w = std::min(w, ctx_->weight(t.first));
    return w;
}

Series Series::truncated(int max_weight) const {
    Series s;
    s.ctx_ = ctx_;
    for (const auto& t : terms_)
        if (!ctx_ || ctx_->weight(t.first) <= max_weight) s.terms_.push_back(t);
    return s;
}

Series Series::embedded(const ContextPtr& target) const {
    Series s;
    s.ctx_ = target;
    if (!ctx_) {
        s.terms_ = terms_;
        s.canonicalize();
        return s;
    }
    std::vector<int> map(ctx_->size());
    for (std::size_t i = 0; i < ctx_->size(); ++i) {
        map[i] = target->index_of(ctx_->generators()[i].name);
    }
    for (const auto& [m, c] : terms_) {
        Monomial n{};
        bool ok = true;
        for (std::size_t i = 0; i < ctx_->size(); ++i) {
            if (m[i] == 0) continue;
            if (map[i] < 0) {
                ok = false;
                break;
            }
            n[map[i]] = m[i];
        }
        if (!ok)
            throw ContextError("cannot embed series: generator missing in target context");
        s.terms_.emplace_back(n, c);
    }
    s.canonicalize();
    return s;
}

ContextPtr Series::common_context(const Series& a, const Series& b) {
    if (!a.ctx_) return b.ctx_;
    if (!b.ctx_) return a.ctx_;
    if (!a.ctx_->same_as(*b.ctx_)) throw ContextError("mismatched ring contexts");
    return a.ctx_;
}

void Series::promote(const ContextPtr& ctx) {
    if (ctx_ || !ctx) return;
    ctx_ = ctx;
}

void Series::canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& x, const Term& y) { return x.first < y.first; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [&](const Term& t) {
        return t.second == 0 || (ctx_ && !ctx_->admissible(t.first));
    });
    terms_ = std::move(out);
}

Series Series::operator-() const {
    Series s = *this;
    for (auto& t : s.terms_) t.second = -t.second;
    return s;
}

Series& Series::operator+=(const Series& o) {
    auto ctx = common_context(*this, o);
    promote(ctx);
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
            out.push_back(std::move(terms_[i++]));
        } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
            if (!ctx_ || ctx_->admissible(o.terms_[j].first)) out.push_back(o.terms_[j]);
            ++j;
        } else {
            Rational c = terms_[i].second + o.terms_[j].second;
            if (c != 0) out.emplace_back(terms_[i].first, std::move(c));
            ++i;
            ++j;
        }
    }
    terms_ = std::move(out);
    return *this;
}

Series& Series::operator-=(const Series& o) { return *this += -o; }

Series& Series::operator*=(const Series& o) {
    *this = *this * o;
    return *this;
}

Series& Series::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.second *= c;
    return *this;
}

namespace {

constexpr std::size_t kParallelThreshold = 4096;

Series multiply_with(const Series& a, const Series& b, bool parallel) {
    if (a.is_zero() || b.is_zero()) {
        Series z = a.context() ? Series(a.context(), 0) : Series(b.context(), 0);
        return z;
    }
    ContextPtr ctx = a.context() ? a.context() : b.context();
    if (a.context() && b.context() && !a.context()->same_as(*b.context()))
        throw ContextError("mismatched ring contexts");
    if (!ctx) return Series(a.constant_term() * b.constant_term());

    const auto& ta = a.terms();
    const auto& tb = b.terms();
    std::vector<int> wb(tb.size());
    for (std::size_t j = 0; j < tb.size(); ++j) wb[j] = ctx->weight(tb[j].first);
    const int order = ctx->order();

    std::vector<Series::Term> collected;
    if (!parallel || ta.size() * tb.size() < kParallelThreshold) {
        std::map<Monomial, Rational> acc;
        Rational tmp;
        Monomial m;
        for (const auto& [ma, ca] : ta) {
            int wa = ctx->weight(ma);
            for (std::size_t j = 0; j < tb.size(); ++j) {
                if (wa + wb[j] > order || !add_monomials(*ctx, ma, tb[j].first, m)) continue;
                mpq_mul(tmp.get_mpq_t(), ca.get_mpq_t(), tb[j].second.get_mpq_t());
                auto& slot = acc[m];
                mpq_add(slot.get_mpq_t(), slot.get_mpq_t(), tmp.get_mpq_t());
            }
        }
        collected.reserve(acc.size());
        for (auto& [k, v] : acc) collected.emplace_back(k, std::move(v));
    } else {
        int threads = omp_get_max_threads();
        std::vector<std::vector<Series::Term>> partial(threads);
#pragma omp parallel num_threads(threads)
        {
            std::unordered_map<Monomial, Rational, MonomialHash> acc;
            Rational tmp;
            Monomial m;
#pragma omp for schedule(dynamic, 4)
            for (std::size_t i = 0; i < ta.size(); ++i) {
                const auto& [ma, ca] = ta[i];
                int wa = ctx->weight(ma);
                for (std::size_t j = 0; j < tb.size(); ++j) {
                    if (wa + wb[j] > order || !add_monomials(*ctx, ma, tb[j].first, m)) continue;
                    mpq_mul(tmp.get_mpq_t(), ca.get_mpq_t(), tb[j].second.get_mpq_t());
                    auto& slot = acc[m];
                    mpq_add(slot.get_mpq_t(), slot.get_mpq_t(), tmp.get_mpq_t());
                }
            }
            auto& mine = partial[omp_get_thread_num()];
            mine.reserve(acc.size());
            for (auto& [k, v] : acc) mine.emplace_back(k, std::move(v));
        }
        for (auto& p : partial)
            for (auto& t : p) collected.push_back(std::move(t));
    }
    return Series::from_terms(ctx, std::move(collected));
}

}  // namespace

Series mul_serial(const Series& a, const Series& b) { return multiply_with(a, b, false); }
Series mul_parallel(const Series& a, const Series& b) { return multiply_with(a, b, true); }

Series operator*(const Series& a, const Series& b) { return mul_parallel(a, b); }

bool operator==(const Series& a, const Series& b) {
    if (a.ctx_ && b.ctx_ && !a.ctx_->same_as(*b.ctx_)) return false;
    return a.terms_ == b.terms_;
}

std::string Series::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational a = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        bool unit = (m == kUnit);
        if (unit || a != 1) {
            os << a.get_str();
            if (!unit) os << "*";
        }
        bool lead = true;
        if (ctx_) {
            for (std::size_t i = 0; i < ctx_->size(); ++i) {
                if (m[i] == 0) continue;
                if (!lead) os << "*";
                lead = false;
                os << ctx_->generators()[i].name;
                if (m[i] > 1) os << "^" << int(m[i]);
            }
        }
    }
    return os.str();
}

Series adams(int k, const Series& a) {
    if (k < 1) throw std::invalid_argument("Adams index must be positive");
    if (k == 1 || !a.context()) return a;
    const auto& ctx = a.context();
    std::vector<Series::Term> out;
    out.reserve(a.size());
    for (const auto& [m, c] : a.terms()) {
        Monomial n = m;
        bool ok = true;
        for (std::size_t i = 0; i < ctx->size(); ++i) {
            if (ctx->generators()[i].rule != AdamsRule::MonomialScaling) continue;
            int e = int(m[i]) * k;
            if (e > 255) {
                ok = false;
                break;
            }
            n[i] = static_cast<std::uint8_t>(e);
        }
        if (ok) out.emplace_back(n, c);
    }
    return Series::from_terms(ctx, std::move(out));
}

Series power(const Series& a, int e) {
    if (e < 0) throw std::invalid_argument("negative power");
    Series result(a.context(), 1);
    Series base = a;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

int filtration_weight(const Series& a) { return a.weight(); }

Series inverse(const Series& a) {
    Rational c = a.constant_term();
    if (c == 0) throw std::domain_error("series is not a unit");
    // a = c (1 + u), u without constant term; weight-0 nilpotent parts keep the sum finite.
    Series u = a * Rational(1 / c) - Series(a.context(), 1);
    Series result(a.context(), 1);
    Series term(a.context(), 1);
    for (int k = 1;; ++k) {
        term = -(term * u);
        if (term.is_zero()) break;
        result += term;
        if (k > 4096) throw std::logic_error("geometric series did not terminate");
    }
    return result * Rational(1 / c);
}

Series log_unit(const Series& a) {
    if (a.constant_term() != 1) throw std::domain_error("log requires constant term 1");
    Series u = a - Series(a.context(), 1);
    Series result(a.context(), 0);
    Series term(a.context(), 1);
    for (int k = 1;; ++k) {
        term = term * u;
        if (term.is_zero()) break;
        result += term * Rational((k % 2 ? 1 : -1), k);
        if (k > 4096) throw std::logic_error("log series did not terminate");
    }
    return result;
}

Series coefficient_of(const Series& a, int generator_index, int k) {
    std::vector<Series::Term> out;
    for (const auto& [m, c] : a.terms()) {
        if (m[generator_index] != k) continue;
        Monomial n = m;
        n[generator_index] = 0;
        out.emplace_back(n, c);
    }
    return Series::from_terms(a.context(), std::move(out));
}

Series parse_series(const ContextPtr& ctx, const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    Series result(ctx, 0);
    if (s.empty() || s == "0") return result;
    std::size_t pos = 0;
    while (pos < s.size()) {
        int sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            if (s[pos] == '-') sign = -1;
            ++pos;
        }
        std::size_t end = pos;
        while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
        std::string term = s.substr(pos, end - pos);
        if (term.empty()) throw std::invalid_argument("bad series expression: " + text);
        Rational coef = sign;
        Monomial m{};
        std::size_t p = 0;
        while (p <= term.size()) {
            std::size_t q = term.find('*', p);
            if (q == std::string::npos) q = term.size();
            std::string factor = term.substr(p, q - p);
            if (factor.empty()) throw std::invalid_argument("bad series term: " + term);
            if (std::isdigit(static_cast<unsigned char>(factor[0]))) {
                coef *= parse_rational(factor);
            } else {
                std::string name = factor;
                int e = 1;
                auto caret = factor.find('^');
                if (caret != std::string::npos) {
                    name = factor.substr(0, caret);
                    e = std::stoi(factor.substr(caret + 1));
                }
                int idx = ctx->index_of(name);
                if (idx < 0) throw ContextError("unknown generator " + name);
                if (e < 0 || int(m[idx]) + e > 255)
                    throw std::invalid_argument("bad exponent in " + factor);
                m[idx] = static_cast<std::uint8_t>(m[idx] + e);
            }
            p = q + 1;
        }
        result += Series::monomial(ctx, m, coef);
        pos = end;
    }
    return result;
}

}  // namespace qkr
