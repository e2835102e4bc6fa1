#include "symhom/common.hpp"

#include <atomic>
#include <cctype>

namespace symhom
{

RingSpec RingSpec::prime_field(std::uint32_t p)
{
    if (!is_prime(p))
        throw DomainError("prime field characteristic " + std::to_string(p) + " is not prime");
    return {RingKind::PrimeField, p};
}

std::string RingSpec::name() const
{
    switch (kind) {
    case RingKind::Integers:
        return "Z";
    case RingKind::Rationals:
        return "Q";
    case RingKind::PrimeField:
        return "F" + std::to_string(characteristic);
    }
    return "?";
}

RingSpec RingSpec::parse(const std::string& text)
{
    if (text == "Z")
        return integers();
    if (text == "Q")
        return rationals();
    std::string digits;
    if (text.size() > 1 && text[0] == 'F')
        digits = text.substr(1);
    else if (text.size() > 2 && text.rfind("GF", 0) == 0)
        digits = text.substr(2);
    if (!digits.empty()) {
        for (char c : digits)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ValidationError("unrecognised ring '" + text + "' (expected Z, Q or F<p>)");
        unsigned long long p = std::stoull(digits);
        if (p > 0xFFFFFFFFull || !is_prime(p))
            throw ValidationError("ring '" + text + "': characteristic must be a prime below 2^32");
        return {RingKind::PrimeField, static_cast<std::uint32_t>(p)};
    }
    throw ValidationError("unrecognised ring '" + text + "' (expected Z, Q or F<p>)");
}

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull})
        if (n % d == 0)
            return n == d;
    for (std::uint64_t d = 17; d * d <= n; d += 2)
        if (n % d == 0)
            return false;
    return true;
}

std::string to_string(const Integer& value) { return value.str(); }

std::string to_string(const Rational& value)
{
    if (is_integral(value))
        return boost::multiprecision::numerator(value).str();
    return boost::multiprecision::numerator(value).str() + "/" + boost::multiprecision::denominator(value).str();
}

namespace
{
std::uint32_t mod_inverse(std::uint64_t a, std::uint64_t p)
{
    std::uint64_t result = 1, base = a % p, e = p - 2;
    while (e) {
        if (e & 1)
            result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}
} // namespace

std::uint32_t reduce_mod(const Rational& value, std::uint32_t p)
{
    Integer num = boost::multiprecision::numerator(value) % p;
    if (num < 0)
        num += p;
    Integer den = boost::multiprecision::denominator(value) % p;
    if (den == 0)
        throw DomainError("denominator divisible by the characteristic " + std::to_string(p));
    auto n = num.convert_to<std::uint64_t>();
    auto d = den.convert_to<std::uint64_t>();
    return static_cast<std::uint32_t>(n * mod_inverse(d, p) % p);
}

std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text)
        h = (h ^ c) * 1099511628211ull;
    return h;
}

namespace
{
std::atomic<int> g_threads{1};
}

int max_threads() { return g_threads.load(); }

void set_max_threads(int n) { g_threads.store(n < 1 ? 1 : n); }

} // namespace symhom
