#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace symhom
{

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr const char* kEngineVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// Error hierarchy. Every exception thrown by the library derives from Error.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// A mathematical precondition was violated (mismatched arities, invalid
// partitions, non-automorphism passed where an automorphism is required ...).
class DomainError : public Error
{
public:
    using Error::Error;
};

// The request is well formed but outside what the engine offers.
class UnsupportedError : public Error
{
public:
    using Error::Error;
};

// Malformed external input (algebra files, matrix files, CLI parameters).
class ValidationError : public Error
{
public:
    using Error::Error;
};

// A computation would exceed a configured size limit.
class ResourceLimitError : public Error
{
public:
    using Error::Error;
};

// Homology was requested in a degree whose adjacent boundary is not part of
// the (truncated) complex.
class TruncationError : public Error
{
public:
    using Error::Error;
};

// An identity that must hold by construction failed. Indicates a bug.
class InternalError : public Error
{
public:
    using Error::Error;
};

enum class RingKind
{
    Integers,
    Rationals,
    PrimeField
};

// Ground ring k.
struct RingSpec
{
    RingKind kind = RingKind::Integers;
    std::uint32_t characteristic = 0;

    static RingSpec integers() { return {RingKind::Integers, 0}; }
    static RingSpec rationals() { return {RingKind::Rationals, 0}; }
    static RingSpec prime_field(std::uint32_t p);

    bool is_field() const { return kind != RingKind::Integers; }

    // "Z", "Q", "F7"
    std::string name() const;

    // Accepts Z, Q, F<p> and GF<p>.
    static RingSpec parse(const std::string& text);

    friend bool operator==(const RingSpec&, const RingSpec&) = default;
};

bool is_prime(std::uint64_t n);

std::string to_string(const Integer& value);
std::string to_string(const Rational& value);

// Reduces a rational modulo p; throws DomainError when p divides the denominator.
std::uint32_t reduce_mod(const Rational& value, std::uint32_t p);

// True when both numerator and denominator fit: value is an integer.
inline bool is_integral(const Rational& value)
{
    return boost::multiprecision::denominator(value) == 1;
}

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

// Worker cap for internally parallel loops (default 1).
int max_threads();
void set_max_threads(int n);

} // namespace symhom
