#include "gwp/numeric.hpp"

#include "gwp/error.hpp"

#include <cctype>
#include <ostream>

namespace gwp {

namespace {

Rational parse_rational(std::string_view text, std::string_view whole) {
    if (text.empty()) throw ParseError("empty rational in '" + std::string(whole) + "'");
    std::string s(text);
    auto slash = s.find('/');
    auto digits_ok = [](std::string_view d, bool allow_sign) {
        if (allow_sign && !d.empty() && (d[0] == '-' || d[0] == '+')) d.remove_prefix(1);
        if (d.empty()) return false;
        for (char c : d)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    std::string_view num = std::string_view(s).substr(0, slash);
    std::string_view den = slash == std::string::npos ? std::string_view("1") : std::string_view(s).substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false))
        throw ParseError("malformed rational '" + s + "' in '" + std::string(whole) + "'");
    std::string num_s(num);
    if (num_s[0] == '+') num_s.erase(0, 1);
    Integer n(num_s, 10);
    Integer d(std::string(den), 10);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(whole) + "'");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

// Parses one signed term: "3/4", "-i", "2*i", "1/2*i", "+i".
void parse_term(std::string_view term, std::string_view whole, Rational& re, Rational& im) {
    bool imaginary = !term.empty() && term.back() == 'i';
    if (!imaginary) {
        re += parse_rational(term, whole);
        return;
    }
    term.remove_suffix(1);
    if (!term.empty() && term.back() == '*') {
        term.remove_suffix(1);
        im += parse_rational(term, whole);
    } else if (term.empty() || term == "+") {
        im += 1;
    } else if (term == "-") {
        im -= 1;
    } else {
        throw ParseError("malformed imaginary term in '" + std::string(whole) + "'");
    }
}

}  // namespace

GaussianRational GaussianRational::parse(std::string_view text) {
    std::string compact;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
    if (compact.empty()) throw ParseError("empty Gaussian rational");

    Rational re(0), im(0);
    std::size_t start = 0;
    int terms = 0;
    for (std::size_t k = 1; k <= compact.size(); ++k) {
        if (k == compact.size() || compact[k] == '+' || compact[k] == '-') {
            if (k < compact.size() && compact[k - 1] == '/') continue;
            parse_term(std::string_view(compact).substr(start, k - start), text, re, im);
            ++terms;
            start = k;
        }
    }
    if (terms > 2) throw ParseError("too many terms in '" + std::string(text) + "'");
    return {re, im};
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

GaussianRational GaussianRational::inv() const {
    if (is_zero()) throw PreconditionError("division-by-zero", "inverse of zero in Q[i]");
    Rational n = norm();
    return {re_ / n, -im_ / n};
}

std::string GaussianRational::to_string() const {
    const bool has_re = sgn(re_) != 0;
    const bool has_im = sgn(im_) != 0;
    if (!has_re && !has_im) return "0";
    std::string out;
    if (has_re) out = re_.get_str();
    if (has_im) {
        Rational mag = abs(im_);
        if (sgn(im_) < 0)
            out += "-";
        else if (has_re)
            out += "+";
        out += mag == 1 ? std::string("i") : mag.get_str() + "*i";
    }
    return out;
}

GaussianRational add(const GaussianRational& a, const GaussianRational& b) { return a + b; }
GaussianRational mul(const GaussianRational& a, const GaussianRational& b) { return a * b; }
GaussianRational inv(const GaussianRational& a) { return a.inv(); }

GaussianRational i_power(long n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {Rational(1), Rational(0)};
        case 1: return {Rational(0), Rational(1)};
        case 2: return {Rational(-1), Rational(0)};
        default: return {Rational(0), Rational(-1)};
    }
}

GaussianRational pow(const GaussianRational& z, unsigned long n) {
    GaussianRational result(1), base = z;
    while (n) {
        if (n & 1UL) result *= base;
        n >>= 1;
        if (n) base *= base;
    }
    return result;
}

Rational factorial(unsigned long n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.to_string(); }

}  // namespace gwp
