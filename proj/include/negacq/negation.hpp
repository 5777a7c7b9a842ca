#pragma once

#include <array>
#include <set>
#include <string>
#include <string_view>

namespace negacq {

/// Pragmatic negation types. Human codes come first, robot codes follow.
enum class NegationType {
    // human
    NII,  // negative intent interpretation
    NMQ,  // negative motivational question
    TFD,  // truth-functional denial
    TFN,  // truth-functional negation
    Prohibition,
    Disallowance,
    NegAgreement,
    NTQ,  // negative tag question
    MotDepAssertion,
    NegPerspAssertion,
    NegatingSelfProhibition,
    ApostrNegation,
    NegImperative,
    Rejection,
    NegQuestion,
    NegPromise,
    NegPerspQuestion,
    MotDepExclamation,
    Unknown,
    // robot
    TD,
    MD,
    A,
    R,
    I,
    E,
    SP,
    PD,
};

inline constexpr std::array<NegationType, 19> kHumanNegationTypes{
    NegationType::NII, NegationType::NMQ, NegationType::TFD, NegationType::TFN,
    NegationType::Prohibition, NegationType::Disallowance, NegationType::NegAgreement,
    NegationType::NTQ, NegationType::MotDepAssertion, NegationType::NegPerspAssertion,
    NegationType::NegatingSelfProhibition, NegationType::ApostrNegation,
    NegationType::NegImperative, NegationType::Rejection, NegationType::NegQuestion,
    NegationType::NegPromise, NegationType::NegPerspQuestion, NegationType::MotDepExclamation,
    NegationType::Unknown};

inline constexpr std::array<NegationType, 8> kRobotNegationTypes{
    NegationType::TD, NegationType::MD, NegationType::A, NegationType::R,
    NegationType::I,  NegationType::E,  NegationType::SP, NegationType::PD};

bool is_human_type(NegationType t);
bool is_robot_type(NegationType t);
/// Prohibition or Disallowance.
bool is_prohibitive(NegationType t);

/// Human codes are spelled like the enumerators ("NII", "Prohibition");
/// robot codes carry a "robot:" prefix ("robot:TD") so the namespaces never collide.
std::string to_string(NegationType t);
NegationType parse_negation_type(std::string_view s);

/// The closed inventory of negation words recognised in transcripts.
const std::set<std::string>& negation_lexicon();
bool is_negation_word(std::string_view w);

}  // namespace negacq
