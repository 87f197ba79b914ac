#include "swanlab/io.hpp"

#include <cctype>
#include <cstring>
#include <json.hpp>
#include <utility>

namespace swanlab {

std::string fq_str(const FqPtr& F, Fq::Elem a) { return F->to_string(a); }

std::string poly_str(const FqPoly& a) {
    if (a.is_zero()) return "0";
    std::string out;
    for (int i = 0; i <= a.degree(); ++i) {
        Fq::Elem c = a.coeff(i);
        if (c == 0) continue;
        std::string term;
        if (i == 0) {
            term = a.F->to_string(c);
        } else {
            std::string base = i == 1 ? "s" : "s^" + std::to_string(i);
            term = c == a.F->one() ? base : a.F->to_string(c) + "*" + base;
        }
        if (!out.empty()) out += "+";
        out += term;
    }
    return out;
}

std::string ratfun_str(const RatFun& a) {
    if (a.den.degree() == 0 && a.den.coeff(0) == a.den.F->one())
        return poly_str(a.num);
    return "(" + poly_str(a.num) + ")/(" + poly_str(a.den) + ")";
}

std::string diff_str(const DiffForm& w) { return ratfun_str(w.a); }

// ------------------------------------------------------------ expressions

namespace {

struct Token {
    enum Kind { kInt, kSym, kPi, kOp, kEnd };
    Kind kind;
    long long num = 0;  // kInt payload
    std::string text;   // kSym / kOp payload
    Rat arg = 0;        // kPi payload
    size_t pos = 0;
};

[[noreturn]] void bad(const std::string& what, size_t pos) {
    throw InvalidInput(what + " at position " + std::to_string(pos));
}

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < text.size() &&
                   std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            long long v = 0;
            try {
                v = std::stoll(text.substr(i, j - i));
            } catch (const std::out_of_range&) {
                bad("integer literal too large", i);
            }
            out.push_back({Token::kInt, v, "", 0, i});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) ||
                    text[j] == '_'))
                ++j;
            std::string name = text.substr(i, j - i);
            if (name == "pi") {
                if (j >= text.size() || text[j] != '[')
                    bad("pi needs a bracketed exponent", i);
                size_t close = text.find(']', j);
                if (close == std::string::npos)
                    bad("unterminated pi exponent", j);
                Rat t = parse_rat(text.substr(j + 1, close - j - 1));
                out.push_back({Token::kPi, 0, "", t, i});
                i = close + 1;
                continue;
            }
            out.push_back({Token::kSym, 0, name, 0, i});
            i = j;
            continue;
        }
        if (std::strchr("+-*/^()", c)) {
            out.push_back({Token::kOp, 0, std::string(1, c), 0, i});
            ++i;
            continue;
        }
        bad(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({Token::kEnd, 0, "", 0, text.size()});
    return out;
}

// Recursive descent over the shared grammar, evaluated directly in the
// target domain through Ops.
template <class Ops>
class Parser {
  public:
    Parser(const Ops& ops, std::vector<Token> toks)
        : ops_(ops), toks_(std::move(toks)) {}

    typename Ops::Value run() {
        auto v = expr();
        if (cur().kind != Token::kEnd) bad("trailing input", cur().pos);
        return v;
    }

  private:
    const Token& cur() const { return toks_[at_]; }
    bool is_op(const char* s) const {
        return cur().kind == Token::kOp && cur().text == s;
    }
    void advance() { ++at_; }

    typename Ops::Value expr() {
        auto v = term();
        while (is_op("+") || is_op("-")) {
            bool plus = cur().text == "+";
            advance();
            auto w = term();
            v = plus ? ops_.add(v, w) : ops_.sub(v, w);
        }
        return v;
    }

    typename Ops::Value term() {
        auto v = factor();
        while (is_op("*") || is_op("/")) {
            bool mul = cur().text == "*";
            size_t pos = cur().pos;
            advance();
            auto w = factor();
            v = mul ? ops_.mul(v, w) : ops_.div(v, w, pos);
        }
        return v;
    }

    typename Ops::Value factor() {
        auto v = atom();
        if (is_op("^")) {
            advance();
            long long sign = 1;
            if (is_op("-")) {
                sign = -1;
                advance();
            }
            if (cur().kind != Token::kInt)
                bad("exponent must be an integer", cur().pos);
            long long e = sign * cur().num;
            advance();
            v = ops_.pow(v, e, cur().pos);
        }
        return v;
    }

    typename Ops::Value atom() {
        const Token& t = cur();
        switch (t.kind) {
            case Token::kInt:
                advance();
                return ops_.integer(t.num);
            case Token::kSym:
                advance();
                return ops_.symbol(t.text, t.pos);
            case Token::kPi:
                advance();
                return ops_.pi(t.arg, t.pos);
            case Token::kOp:
                if (t.text == "(") {
                    advance();
                    auto v = expr();
                    if (!is_op(")")) bad("expected ')'", cur().pos);
                    advance();
                    return v;
                }
                if (t.text == "-") {
                    advance();
                    return ops_.neg(factor());
                }
                bad("unexpected operator '" + t.text + "'", t.pos);
            default:
                bad("unexpected end of input", t.pos);
        }
    }

    Ops ops_;
    std::vector<Token> toks_;
    size_t at_ = 0;
};

struct RatFunOps {
    FqPtr F;
    using Value = RatFun;

    Value integer(long long n) const {
        return RatFun::constant(F, F->from_int(n));
    }
    Value symbol(const std::string& name, size_t pos) const {
        if (name == "s") return RatFun::s(F);
        if (name == "g") return RatFun::constant(F, F->gen());
        bad("unknown residue symbol '" + name + "'", pos);
    }
    Value pi(const Rat&, size_t pos) const {
        bad("pi is not a residue-field symbol", pos);
    }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value div(const Value& a, const Value& b, size_t pos) const {
        if (b.is_zero()) bad("division by zero", pos);
        return a / b;
    }
    Value neg(const Value& a) const { return -a; }
    Value pow(const Value& a, long long e, size_t pos) const {
        if (a.is_zero() && e < 0) bad("division by zero", pos);
        return swanlab::pow(a, e);
    }
};

struct LocOps {
    ConstFieldPtr k;
    using Value = LocElem;

    Value integer(long long n) const { return loc_from_int(k, n); }
    Value symbol(const std::string& name, size_t pos) const {
        if (name == "s") return loc_s(k);
        if (name == "g") return loc_const(k->lift(k->residue_field()->gen()));
        if (name == "zeta_p") return loc_const(k->zeta_p());
        if (name == "zeta_p2") {
            if (k->n < 2)
                bad("zeta_p2 needs a constant field of root depth 2", pos);
            return loc_const(k->zeta_pn());
        }
        bad("unknown symbol '" + name + "'", pos);
    }
    Value pi(const Rat& t, size_t pos) const {
        if (!k->lattice().contains(t))
            bad("pi exponent " + rat_str(t) + " outside the value lattice",
                pos);
        return loc_pi(k, t);
    }
    Value add(const Value& a, const Value& b) const { return loc_add(a, b); }
    Value sub(const Value& a, const Value& b) const { return loc_sub(a, b); }
    Value mul(const Value& a, const Value& b) const { return loc_mul(a, b); }
    Value div(const Value& a, const Value& b, size_t pos) const {
        if (loc_is_zero_at_prec(b)) bad("division by zero", pos);
        return loc_div(a, b);
    }
    Value neg(const Value& a) const { return loc_neg(a); }
    Value pow(const Value& a, long long e, size_t pos) const {
        if (e < 0 && loc_is_zero_at_prec(a)) bad("division by zero", pos);
        return loc_pow(a, e);
    }
};

}  // namespace

RatFun parse_ratfun(const FqPtr& F, const std::string& text) {
    return Parser<RatFunOps>(RatFunOps{F}, lex(text)).run();
}

DiffForm parse_diff(const FqPtr& F, const std::string& text) {
    return DiffForm(parse_ratfun(F, text));
}

LocElem parse_loc_expr(const ConstFieldPtr& k, const std::string& text) {
    return Parser<LocOps>(LocOps{k}, lex(text)).run();
}

// ------------------------------------------------------------------- JSON

std::string ram_datum_json(const RamDatum& d) {
    nlohmann::json j;
    j["p"] = d.p;
    j["pairs"] = nlohmann::json::array();
    for (const auto& pr : d.pairs)
        j["pairs"].push_back({{"delta", rat_str(pr.delta)},
                              {"omega", diff_str(pr.omega)}});
    return j.dump();
}

RamDatum parse_ram_datum(const FqPtr& F, const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("datum is not valid JSON: ") +
                           e.what());
    }
    if (!j.is_object() || !j.contains("p") || !j.contains("pairs") ||
        !j["p"].is_number_integer() || !j["pairs"].is_array())
        throw InvalidInput("datum needs an integer \"p\" and a \"pairs\" list");
    RamDatum d{j["p"].get<long long>(), {}};
    for (const auto& e : j["pairs"]) {
        if (!e.is_object() || !e.contains("delta") || !e.contains("omega") ||
            !e["delta"].is_string() || !e["omega"].is_string())
            throw InvalidInput(
                "each pair needs string fields \"delta\" and \"omega\"");
        d.pairs.push_back({parse_rat(e["delta"].get<std::string>()),
                           parse_diff(F, e["omega"].get<std::string>())});
    }
    return d;
}

std::string report_json(const ValidationReport& r) {
    nlohmann::json j;
    j["pass"] = r.pass;
    j["conditions"] = nlohmann::json::array();
    for (const auto& c : r.conditions)
        j["conditions"].push_back(
            {{"clause", c.clause}, {"pass", c.pass}, {"witness", c.witness}});
    return j.dump();
}

}  // namespace swanlab
