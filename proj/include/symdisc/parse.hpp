/*
 *  Copyright 2026 The symdisc Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

// Command-line literals: complex numbers "a+bi" and point lists "(a;b;c)".

#pragma once

#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "symdisc/cx_poly.hpp"

namespace symdisc {

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double parse_real(const std::string& s, const std::string& whole) {
    if (s.empty()) throw ParseError("bad complex literal '" + whole + "'");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) throw ParseError("bad complex literal '" + whole + "'");
    return v;
}

}  // namespace detail

/// Parses "3", "-2.5", "i", "-i", "2i", "1+i", "1-2.5i", "1e-3+2e-2i".
inline Cx parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty complex literal");
    if (s.back() != 'i' && s.back() != 'j') return {detail::parse_real(s, text), 0.0};
    s.pop_back();
    // split at the last sign that is not an exponent sign
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    const std::string re = split == std::string::npos ? "" : s.substr(0, split);
    std::string im = split == std::string::npos ? s : s.substr(split);
    if (im.empty() || im == "+")
        im = "1";
    else if (im == "-")
        im = "-1";
    return {re.empty() ? 0.0 : detail::parse_real(re, text), detail::parse_real(im, text)};
}

/// Parses a list of complex literals separated by ';' or ',', optionally
/// wrapped in parentheses or brackets.
inline std::vector<Cx> parse_cx_list(const std::string& text) {
    std::string s = text;
    auto trim = [](std::string& x) {
        while (!x.empty() && std::isspace(static_cast<unsigned char>(x.front()))) x.erase(x.begin());
        while (!x.empty() && std::isspace(static_cast<unsigned char>(x.back()))) x.pop_back();
    };
    trim(s);
    if (s.size() >= 2 && ((s.front() == '(' && s.back() == ')') || (s.front() == '[' && s.back() == ']')))
        s = s.substr(1, s.size() - 2);
    std::vector<Cx> out;
    std::string cur;
    for (char c : s) {
        if (c == ';' || c == ',') {
            out.push_back(parse_complex(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(parse_complex(cur));
    return out;
}

}  // namespace symdisc
