#include "regsolve/smtlib.hpp"

#include <cstdio>

#include "regsolve/errors.hpp"

namespace regsolve {

namespace {

void append_codepoint_escape(std::string& out, char32_t c) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "\\u{%x}", static_cast<unsigned>(c));
    out += buf;
}

std::string smt_char(char32_t c) {
    std::string out;
    append_codepoint_escape(out, c);
    return "\"" + out + "\"";
}

std::string class_item_regex(const ClassItem& item) {
    switch (item.kind) {
        case ClassItem::Kind::Char:
            return "(str.to_re " + smt_string_literal(Text(1, item.lo)) + ")";
        case ClassItem::Kind::Range:
            return "(re.range " + smt_char(item.lo) + " " + smt_char(item.hi) + ")";
        case ClassItem::Kind::Digit:
            return "(re.range \"0\" \"9\")";
        case ClassItem::Kind::NotDigit:
            return "(re.comp (re.range \"0\" \"9\"))";
        case ClassItem::Kind::Word:
            return "(re.union (re.range \"a\" \"z\") (re.range \"A\" \"Z\") (re.range \"0\" "
                   "\"9\") (str.to_re \"_\"))";
        case ClassItem::Kind::NotWord:
            return "(re.comp (re.union (re.range \"a\" \"z\") (re.range \"A\" \"Z\") (re.range "
                   "\"0\" \"9\") (str.to_re \"_\")))";
        case ClassItem::Kind::Space:
            return "(re.union (str.to_re \" \") (str.to_re \"\\u{9}\") (str.to_re \"\\u{a}\") "
                   "(str.to_re \"\\u{b}\") (str.to_re \"\\u{c}\") (str.to_re \"\\u{d}\") "
                   "(str.to_re \"\\u{a0}\") (str.to_re \"\\u{2028}\") (str.to_re \"\\u{2029}\") "
                   "(str.to_re \"\\u{feff}\"))";
        case ClassItem::Kind::NotSpace:
            return "(re.comp " + class_item_regex(ClassItem::shorthand(ClassItem::Kind::Space)) +
                   ")";
    }
    return "re.none";
}

}  // namespace

std::string smt_string_literal(const Text& text) {
    std::string out = "\"";
    for (char32_t c : text) {
        if (c == U'"') {
            out += "\"\"";
        } else if (c == U'\\') {
            append_codepoint_escape(out, c);  // avoid accidental \u{} forms
        } else if (c >= 0x20 && c < 0x7F) {
            out += static_cast<char>(c);
        } else {
            append_codepoint_escape(out, c);
        }
    }
    return out + "\"";
}

std::string smt_regex(const CRegexPtr& re) {
    switch (re->kind) {
        case CRegex::Kind::Lit:
            return "(str.to_re " + smt_string_literal(re->lit) + ")";
        case CRegex::Kind::AnyChar:
            return "re.allchar";
        case CRegex::Kind::Dot:
            return "(re.diff re.allchar (re.union (str.to_re \"\\u{a}\") (str.to_re "
                   "\"\\u{d}\")))";
        case CRegex::Kind::Class: {
            if (re->items.empty())
                return re->negated ? "re.allchar" : "re.none";
            std::string inner;
            if (re->items.size() == 1) {
                inner = class_item_regex(re->items[0]);
            } else {
                inner = "(re.union";
                for (const auto& item : re->items) inner += " " + class_item_regex(item);
                inner += ")";
            }
            if (re->negated) return "(re.diff re.allchar " + inner + ")";
            return inner;
        }
        case CRegex::Kind::Concat: {
            std::string out = "(re.++";
            for (const auto& c : re->children) out += " " + smt_regex(c);
            return out + ")";
        }
        case CRegex::Kind::Alt: {
            std::string out = "(re.union";
            for (const auto& c : re->children) out += " " + smt_regex(c);
            return out + ")";
        }
        case CRegex::Kind::Star:
            return "(re.* " + smt_regex(re->child) + ")";
        case CRegex::Kind::Loop: {
            std::string inner = smt_regex(re->child);
            if (re->max == kRepInfinity) {
                if (re->min == 0) return "(re.* " + inner + ")";
                if (re->min == 1) return "(re.+ " + inner + ")";
                return "(re.++ ((_ re.loop " + std::to_string(re->min) + " " +
                       std::to_string(re->min) + ") " + inner + ") (re.* " + inner + "))";
            }
            return "((_ re.loop " + std::to_string(re->min) + " " + std::to_string(re->max) +
                   ") " + inner + ")";
        }
    }
    return "re.none";
}

std::string smt_term(const Term& term) {
    switch (term->kind) {
        case TermNode::Kind::Lit:
            return smt_string_literal(term->lit);
        case TermNode::Kind::Var:
            return term->name;
        case TermNode::Kind::CapValue:
            return term->name + ".val";
        case TermNode::Kind::Concat: {
            std::string out = "(str.++";
            for (const auto& p : term->parts) out += " " + smt_term(p);
            return out + ")";
        }
    }
    return "\"\"";
}

namespace {

std::string smt_formula(const Ir& ir) {
    switch (ir->kind) {
        case IrNode::Kind::True:
            return "true";
        case IrNode::Kind::False:
            return "false";
        case IrNode::Kind::StrEq:
            return "(= " + smt_term(ir->lhs) + " " + smt_term(ir->rhs) + ")";
        case IrNode::Kind::LenEq:
            return "(= (str.len " + smt_term(ir->subject) + ") " + std::to_string(ir->len) + ")";
        case IrNode::Kind::InRe:
            return "(str.in_re " + smt_term(ir->subject) + " " + smt_regex(ir->re) + ")";
        case IrNode::Kind::NotInRe:
            return "(not (str.in_re " + smt_term(ir->subject) + " " + smt_regex(ir->re) + "))";
        case IrNode::Kind::CapUndef:
            return "(not " + ir->cap + ".def)";
        case IrNode::Kind::CapEq:
            return "(and " + ir->cap + ".def (= " + ir->cap + ".val " + smt_term(ir->lhs) + "))";
        case IrNode::Kind::And:
        case IrNode::Kind::Or: {
            std::string out = ir->kind == IrNode::Kind::And ? "(and" : "(or";
            for (const auto& k : ir->kids) out += " " + smt_formula(k);
            return out + ")";
        }
        case IrNode::Kind::Not:
            return "(not " + smt_formula(ir->kids[0]) + ")";
        case IrNode::Kind::Implies:
            return "(=> " + smt_formula(ir->kids[0]) + " " + smt_formula(ir->kids[1]) + ")";
    }
    return "false";
}

// Subject words and captures stay clear of the injected markers and of the
// line separators outside the supported alphabet.
const char* kExcludedAlphabetRe =
    "(re.* (re.diff re.allchar (re.union (str.to_re \"\\u{2}\") (str.to_re \"\\u{3}\") "
    "(str.to_re \"\\u{2028}\") (str.to_re \"\\u{2029}\"))))";

}  // namespace

std::string emit_declarations(const ConstraintProblem& problem) {
    std::string out;
    for (const auto& v : problem.string_vars) {
        out += "(declare-fun " + v.name + " () String)\n";
        if (v.max_len)
            out += "(assert (<= (str.len " + v.name + ") " + std::to_string(*v.max_len) + "))\n";
        if (v.exclude_meta)
            out += "(assert (str.in_re " + v.name + " " + kExcludedAlphabetRe + "))\n";
    }
    for (const auto& c : problem.capture_vars) {
        out += "(declare-fun " + c + ".def () Bool)\n";
        out += "(declare-fun " + c + ".val () String)\n";
        out += "(assert (=> (not " + c + ".def) (= " + c + ".val \"\")))\n";
    }
    return out;
}

std::string emit_assert(const Ir& ir) { return "(assert " + smt_formula(ir) + ")\n"; }

std::string emit_smtlib(const ConstraintProblem& problem) {
    std::string out = "(set-option :produce-models true)\n";
    out += emit_declarations(problem);
    for (const auto& a : problem.assertions) out += emit_assert(a);
    out += "(check-sat)\n";
    return out;
}

}  // namespace regsolve
