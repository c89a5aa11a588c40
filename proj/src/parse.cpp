#include "sic/parse.hpp"

#include <cctype>

namespace sic {

namespace {

class Parser {
public:
    Parser(GenContext* ctx, const std::string& s) : ctx_(ctx), s_(s) {}

    Rat run() {
        Rat r = expr();
        skipWs();
        if (pos_ != s_.size()) throw ParseError("unexpected character", pos_);
        return r;
    }

private:
    GenContext* ctx_;
    const std::string& s_;
    size_t pos_ = 0;

    void skipWs() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skipWs();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Rat expr() {
        Rat r = term();
        while (true) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                r += term();
            } else if (c == '-') {
                ++pos_;
                r -= term();
            } else {
                return r;
            }
        }
    }

    Rat term() {
        Rat r = factor();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                r *= factor();
            } else if (c == '/') {
                ++pos_;
                size_t at = pos_;
                Rat d = factor();
                if (d.isZero()) throw ParseError("division by zero", at);
                r /= d;
            } else {
                return r;
            }
        }
    }

    Rat factor() {
        char c = peek();
        if (c == '-') {
            ++pos_;
            return -factor();
        }
        if (c == '+') {
            ++pos_;
            return factor();
        }
        Rat a = atom();
        skipWs();
        if (eat('^')) {
            skipWs();
            bool neg = eat('-');
            size_t at = pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                throw ParseError("expected integer exponent", at);
            long e = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                e = e * 10 + (s_[pos_] - '0');
                if (e > 1000) throw ParseError("exponent too large", at);
                ++pos_;
            }
            if (neg && a.isZero()) throw ParseError("division by zero", at);
            return a.pow(int(neg ? -e : e));
        }
        return a;
    }

    Rat atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Rat r = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
        throw ParseError("expected expression", pos_);
    }

    Rat number() {
        size_t at = pos_;
        Z n = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            n = n * 10 + (s_[pos_] - '0');
            ++pos_;
        }
        (void)at;
        return Rat(ctx_, Q(n));
    }

    Rat ident() {
        size_t at = pos_;
        std::string name;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            name += s_[pos_];
            ++pos_;
        }
        int order = 0;
        size_t save = pos_;
        while (pos_ < s_.size() && s_[pos_] == '\'') {
            ++order;
            ++pos_;
        }
        // function application "name(z)" / "name'(z)" (no space before '(')
        if (pos_ < s_.size() && s_[pos_] == '(') {
            size_t call = pos_;
            ++pos_;
            skipWs();
            if (pos_ < s_.size() && s_[pos_] == 'z') {
                ++pos_;
                skipWs();
                if (pos_ < s_.size() && s_[pos_] == ')') {
                    ++pos_;
                    return Rat::var(ctx_, ctx_->func(name, order));
                }
            }
            throw ParseError("expected '(z)' after function name", call);
        }
        if (order > 0) throw ParseError("derivative of undeclared function", at);
        pos_ = save;
        int i = ctx_->find(name);
        if (i >= 0) return Rat::var(ctx_, i);
        if (name == "z") return Rat::var(ctx_, ctx_->z());
        return Rat::var(ctx_, ctx_->param(name));
    }
};

}  // namespace

Rat parseExpr(GenContext* ctx, const std::string& text) {
    return Parser(ctx, text).run();
}

}  // namespace sic
