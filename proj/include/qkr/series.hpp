#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qkr {

using Rational = mpq_class;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

struct ContextError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class AdamsRule { MonomialScaling, Fixed };

AdamsRule parse_adams_rule(const std::string& text);
std::string to_string(AdamsRule rule);

struct GeneratorSpec {
    std::string name;
    int weight = 1;
    AdamsRule rule = AdamsRule::MonomialScaling;
    // Largest retained exponent; -1 means unbounded. A weight-0 generator must be capped.
    int max_exponent = -1;
};

inline constexpr std::size_t kMaxGenerators = 24;
inline constexpr int kInfiniteWeight = std::numeric_limits<int>::max();

using Monomial = std::array<std::uint8_t, kMaxGenerators>;

class RingContext {
public:
    RingContext(std::vector<GeneratorSpec> generators, int order);

    const std::vector<GeneratorSpec>& generators() const { return generators_; }
    std::size_t size() const { return generators_.size(); }
    int order() const { return order_; }
    int index_of(const std::string& name) const;
    int weight(const Monomial& m) const;
    bool admissible(const Monomial& m) const;
    bool same_as(const RingContext& other) const;

    // Same generators, different truncation order.
    std::shared_ptr<const RingContext> with_order(int order) const;
    // Appends generators; existing indices are preserved.
    std::shared_ptr<const RingContext> extended(const std::vector<GeneratorSpec>& extra) const;

private:
    std::vector<GeneratorSpec> generators_;
    int order_;
};

using ContextPtr = std::shared_ptr<const RingContext>;

ContextPtr make_context(std::vector<GeneratorSpec> generators, int order);

// Element of the truncated coefficient ring. A series without context is a rational constant.
class Series {
public:
    using Term = std::pair<Monomial, Rational>;

    Series() = default;
    Series(const Rational& c);  // NOLINT(google-explicit-constructor)
    Series(long c) : Series(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    Series(int c) : Series(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    Series(ContextPtr ctx, const Rational& c);

    static Series generator(const ContextPtr& ctx, const std::string& name);
    static Series monomial(const ContextPtr& ctx, const Monomial& m, const Rational& c);
    static Series from_terms(const ContextPtr& ctx, std::vector<Term> terms);

    const ContextPtr& context() const { return ctx_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    Rational coefficient(const Monomial& m) const;
    std::size_t size() const { return terms_.size(); }

    int weight() const;  // minimal monomial weight, kInfiniteWeight for zero
    Series truncated(int max_weight) const;
    Series embedded(const ContextPtr& target) const;  // generators matched by name

    Series operator-() const;
    Series& operator+=(const Series& o);
    Series& operator-=(const Series& o);
    Series& operator*=(const Series& o);
    Series& operator*=(const Rational& c);

    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(const Series& a, const Series& b);
    friend Series operator*(Series a, const Rational& c) { return a *= c; }
    friend Series operator*(const Rational& c, Series a) { return a *= c; }
    friend bool operator==(const Series& a, const Series& b);

    std::string str() const;

private:
    static ContextPtr common_context(const Series& a, const Series& b);
    void promote(const ContextPtr& ctx);
    void canonicalize();

    ContextPtr ctx_;
    std::vector<Term> terms_;  // sorted by monomial, no zero coefficients
};

Series mul_serial(const Series& a, const Series& b);
Series mul_parallel(const Series& a, const Series& b);
Series adams(int k, const Series& a);
Series power(const Series& a, int e);
int filtration_weight(const Series& a);

// Inverse of a unit (constant term nonzero), by geometric series.
Series inverse(const Series& a);
// log(a) for a with constant term 1.
Series log_unit(const Series& a);

// Coefficient of gen^k, as a series in the remaining generators.
Series coefficient_of(const Series& a, int generator_index, int k);

Series parse_series(const ContextPtr& ctx, const std::string& text);

}  // namespace qkr
