#include "negacq/negation.hpp"

#include "negacq/core.hpp"

#include <algorithm>

namespace negacq {

namespace {
struct TypeName {
    NegationType type;
    const char* name;
};

constexpr TypeName kNames[] = {
    {NegationType::NII, "NII"},
    {NegationType::NMQ, "NMQ"},
    {NegationType::TFD, "TFD"},
    {NegationType::TFN, "TFN"},
    {NegationType::Prohibition, "Prohibition"},
    {NegationType::Disallowance, "Disallowance"},
    {NegationType::NegAgreement, "NegAgreement"},
    {NegationType::NTQ, "NTQ"},
    {NegationType::MotDepAssertion, "MotDepAssertion"},
    {NegationType::NegPerspAssertion, "NegPerspAssertion"},
    {NegationType::NegatingSelfProhibition, "NegatingSelfProhibition"},
    {NegationType::ApostrNegation, "ApostrNegation"},
    {NegationType::NegImperative, "NegImperative"},
    {NegationType::Rejection, "Rejection"},
    {NegationType::NegQuestion, "NegQuestion"},
    {NegationType::NegPromise, "NegPromise"},
    {NegationType::NegPerspQuestion, "NegPerspQuestion"},
    {NegationType::MotDepExclamation, "MotDepExclamation"},
    {NegationType::Unknown, "Unknown"},
    {NegationType::TD, "robot:TD"},
    {NegationType::MD, "robot:MD"},
    {NegationType::A, "robot:A"},
    {NegationType::R, "robot:R"},
    {NegationType::I, "robot:I"},
    {NegationType::E, "robot:E"},
    {NegationType::SP, "robot:SP"},
    {NegationType::PD, "robot:PD"},
};
}  // namespace

bool is_human_type(NegationType t) {
    return std::find(kHumanNegationTypes.begin(), kHumanNegationTypes.end(), t) !=
           kHumanNegationTypes.end();
}

bool is_robot_type(NegationType t) { return !is_human_type(t); }

bool is_prohibitive(NegationType t) {
    return t == NegationType::Prohibition || t == NegationType::Disallowance;
}

std::string to_string(NegationType t) {
    for (const auto& n : kNames)
        if (n.type == t) return n.name;
    return "Unknown";
}

NegationType parse_negation_type(std::string_view s) {
    for (const auto& n : kNames)
        if (s == n.name) return n.type;
    throw Error("unknown negation type '" + std::string(s) + "'");
}

const std::set<std::string>& negation_lexicon() {
    static const std::set<std::string> words{
        "no",     "not",     "nono",   "never",   "neither",  "cannot",   "don't",
        "can't",  "isn't",   "didn't", "doesn't", "won't",    "mustn't",  "hasn't",
        "weren't", "haven't", "wasn't", "shouldn't", "wouldn't", "couldn't", "aren't"};
    return words;
}

bool is_negation_word(std::string_view w) {
    return negation_lexicon().count(std::string(w)) > 0;
}

}  // namespace negacq
