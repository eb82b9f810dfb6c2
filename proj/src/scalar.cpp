#include "mha/scalar.hpp"

#include <ostream>
#include <stdexcept>

namespace mha {

Scalar Scalar::inverse() const {
    if (is_zero()) throw std::domain_error("Scalar: division by zero");
    if (sgn(im_) == 0) return Scalar(mpq_class(1 / re_));
    mpq_class n = re_ * re_ + im_ * im_;
    return Scalar(mpq_class(re_ / n), mpq_class(-im_ / n));
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

namespace {

std::string rat_str(const mpq_class& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Scalar: empty rational literal");
    mpq_class q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("Scalar: bad rational literal '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("Scalar: zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

} // namespace

std::string Scalar::str() const {
    if (sgn(im_) == 0) return rat_str(re_);
    std::string out = rat_str(re_);
    if (sgn(im_) >= 0) out += "+";
    out += rat_str(im_) + "*i";
    return out;
}

Scalar Scalar::parse(const std::string& text) {
    auto star = text.rfind("*i");
    if (star == std::string::npos) return Scalar(parse_rat(text));
    if (star + 2 != text.size())
        throw std::invalid_argument("Scalar: bad literal '" + text + "'");
    // Split "<re><sign><im>*i" at the sign that starts the imaginary part:
    // the last '+' or '-' not at position 0 and not directly after '/'.
    std::string head = text.substr(0, star);
    for (std::size_t k = head.size(); k-- > 1;) {
        if ((head[k] == '+' || head[k] == '-') && head[k - 1] != '/') {
            mpq_class re = parse_rat(head.substr(0, k));
            std::string imtxt = head.substr(head[k] == '+' ? k + 1 : k);
            return Scalar(std::move(re), parse_rat(imtxt));
        }
    }
    // Pure imaginary "r/s*i".
    return Scalar(mpq_class(0), parse_rat(head));
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

} // namespace mha
