#include "negacq/teacher.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace negacq {

// ---------------------------------------------------------------------------
// Distributions

template <typename Key>
double Distribution<Key>::total() const {
    double s = 0.0;
    for (const auto& [k, w] : weights) s += w;
    return s;
}

template <typename Key>
double Distribution<Key>::probability(const Key& k) const {
    auto it = weights.find(k);
    return it == weights.end() ? 0.0 : it->second / total();
}

template <typename Key>
Key Distribution<Key>::sample(Rng& rng) const {
    std::vector<double> w;
    std::vector<const Key*> keys;
    for (const auto& [k, v] : weights) {
        keys.push_back(&k);
        w.push_back(v);
    }
    return *keys[rng.weighted_index(w)];
}

template <typename Key>
void Distribution<Key>::validate(const char* what) const {
    for (const auto& [k, w] : weights)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ContractViolation(std::string(what) + ": weights must be finite and non-negative");
    if (!(total() > 0.0)) throw ContractViolation(std::string(what) + ": distribution is empty");
}

template struct Distribution<UtteranceKind>;
template struct Distribution<std::string>;

// ---------------------------------------------------------------------------
// Prohibition response

ProhibitionResponseDist ProhibitionResponseDist::observed() {
    constexpr double counts[9] = {143, 36, 26, 8, 14, 10, 15, 4, 56};
    ProhibitionResponseDist d;
    for (std::size_t i = 0; i < 9; ++i) d.p[i] = counts[i] / 312.0;
    return d;
}

void ProhibitionResponseDist::validate() const {
    double s = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw ContractViolation("prohibition response: negative probability");
        s += v;
    }
    if (std::abs(s - 1.0) > 1e-9) throw ContractViolation("prohibition response must sum to 1");
}

double ProhibitionResponseDist::operator[](TemporalRelation r) const {
    return p[static_cast<std::size_t>(r)];
}

TemporalRelation ProhibitionResponseDist::sample(Rng& rng) const {
    return kAllRelations[rng.weighted_index(p)];
}

// ---------------------------------------------------------------------------
// Default profiles

namespace {

using NT = NegationType;

Distribution<std::string> word_dist(std::initializer_list<std::pair<const std::string, double>> w) {
    return Distribution<std::string>{std::map<std::string, double>(w)};
}

// Negation words observed within each frequent type (absolute counts).
void add_observed_words(TeacherProfile& p) {
    p.words[NT::NII] = word_dist({{"no", 174}, {"not", 59}, {"don't", 201}, {"didn't", 7},
                              {"doesn't", 1}, {"won't", 2}});
    p.words[NT::NMQ] = word_dist({{"no", 191}, {"not", 47}, {"don't", 164}, {"isn't", 9},
                              {"didn't", 1}, {"won't", 1}});
    p.words[NT::TFD] = word_dist({{"no", 212}, {"not", 93}, {"don't", 1}, {"isn't", 4},
                              {"haven't", 1}, {"wasn't", 1}});
    p.words[NT::Prohibition] = word_dist({{"no", 129}, {"not", 40}, {"don't", 2}, {"can't", 68},
                                      {"cannot", 1}, {"mustn't", 4}});
    p.words[NT::Disallowance] = word_dist({{"no", 39}, {"not", 27}, {"don't", 2}, {"can't", 16},
                                       {"cannot", 1}, {"neither", 1}});
    p.words[NT::TFN] = word_dist({{"no", 14}, {"not", 30}, {"don't", 2}, {"can't", 1}, {"haven't", 7},
                              {"didn't", 5}, {"doesn't", 5}, {"hasn't", 1}, {"mustn't", 1}});
    p.words[NT::NTQ] = word_dist({{"no", 1}, {"don't", 58}, {"isn't", 18}, {"can't", 3}, {"haven't", 1},
                              {"didn't", 12}, {"doesn't", 3}, {"hasn't", 2}, {"weren't", 1}});
    // Salient share of each word within its type, relative weights only.
    p.word_salience[NT::NII] = {{"no", 0.629}, {"not", 0.288}, {"don't", 0.193}};
    p.word_salience[NT::NMQ] = {{"no", 0.796}, {"not", 0.170}, {"don't", 0.147}};
    p.word_salience[NT::TFD] = {{"no", 0.346}, {"not", 0.075}, {"don't", 0.0}};
    p.word_salience[NT::Prohibition] = {{"no", 0.659}, {"not", 0.175}, {"don't", 0.5}, {"can't", 0.397}};
    p.word_salience[NT::Disallowance] = {{"no", 0.308}, {"not", 0.148}, {"don't", 0.5}, {"can't", 0.5}};
}

}  // namespace

TeacherProfile TeacherProfile::prohibition_default() {
    TeacherProfile p;
    p.name = "prohibition";
    p.scenario = Scenario::Prohibition;
    p.mix_on_frown.weights = {{std::nullopt, 0.87}, {NT::NII, 0.065}, {NT::NMQ, 0.065}};
    p.mix_default.weights = {{std::nullopt, 0.925}, {NT::TFD, 0.025}, {NT::NTQ, 0.015},
                             {NT::TFN, 0.011},      {NT::NegAgreement, 0.01},
                             {NT::MotDepAssertion, 0.008}, {NT::NegPerspAssertion, 0.006}};
    p.salience = {{NT::Prohibition, 0.605}, {NT::NMQ, 0.418},          {NT::NII, 0.382},
                  {NT::TFD, 0.317},         {NT::Disallowance, 0.415}, {NT::NTQ, 0.493},
                  {NT::NegAgreement, 0.581}, {NT::TFN, 0.24},          {NT::MotDepAssertion, 0.261},
                  {NT::NegPerspAssertion, 0.174}};
    add_observed_words(p);
    return p;
}

TeacherProfile TeacherProfile::rejection_default() {
    TeacherProfile p;
    p.name = "rejection";
    p.scenario = Scenario::Rejection;
    p.mix_on_frown.weights = {{std::nullopt, 0.81}, {NT::NII, 0.105}, {NT::NMQ, 0.085}};
    p.mix_default.weights = {{std::nullopt, 0.93}, {NT::TFD, 0.035}, {NT::NegAgreement, 0.008},
                             {NT::NTQ, 0.008},     {NT::NegPerspAssertion, 0.006},
                             {NT::MotDepAssertion, 0.006}, {NT::TFN, 0.004},
                             {NT::NegImperative, 0.003}};
    p.salience = {{NT::NII, 0.486},          {NT::NMQ, 0.543},  {NT::TFD, 0.291},
                  {NT::NegAgreement, 0.774}, {NT::NTQ, 0.517},  {NT::NegPerspAssertion, 0.545},
                  {NT::MotDepAssertion, 0.095}, {NT::TFN, 0.077}, {NT::NegImperative, 0.30},
                  {NT::Prohibition, 0.605},  {NT::Disallowance, 0.415}};
    add_observed_words(p);
    return p;
}

TeacherProfile TeacherProfile::for_scenario(Scenario s) {
    return s == Scenario::Prohibition ? prohibition_default() : rejection_default();
}

void TeacherProfile::validate() const {
    if (!(utterance_rate > 0.0)) throw ContractViolation("utterance rate must be positive");
    if (!(rate_variation >= 0.0 && rate_variation < 1.0))
        throw ContractViolation("rate variation must lie in [0, 1)");
    mix_on_frown.validate("mix.frown");
    mix_default.validate("mix.default");
    for (const auto* mix : {&mix_on_frown, &mix_default})
        for (const auto& [k, w] : mix->weights)
            if (k && is_prohibitive(*k) && w > 0.0)
                throw ContractViolation("prohibitive utterances come only from prohibition episodes");
    for (const auto& [t, v] : salience)
        if (!(v >= 0.0 && v <= 1.0)) throw ContractViolation("salience probabilities lie in [0, 1]");
    for (const auto& [t, d] : words) {
        d.validate("words");
        for (const auto& [w, c] : d.weights)
            if (!is_negation_word(w))
                throw ContractViolation("'" + w + "' is not a negation word");
    }
    for (const auto& [t, m] : word_salience)
        for (const auto& [w, r] : m)
            if (!(r >= 0.0)) throw ContractViolation("word salience factors must be non-negative");
    if (!(disallowance_share >= 0.0 && disallowance_share <= 1.0))
        throw ContractViolation("disallowance share lies in [0, 1]");
    if (!(denial_response >= 0.0 && denial_response <= 1.0))
        throw ContractViolation("denial response lies in [0, 1]");
    if (episodes_per_presentation < 0) throw ContractViolation("episodes per presentation must be >= 0");
    if (!(approval_share >= 0.0 && approval_share <= 1.0))
        throw ContractViolation("approval share lies in [0, 1]");
    if (!(stress_marked >= 0.0 && stress_marked <= 1.0))
        throw ContractViolation("stress_marked lies in [0, 1]");
    prohibition_response.validate();
    if (!(push_min > 0.0 && push_min <= push_max)) throw ContractViolation("bad push duration range");
    if (!(hold_min > 0.0 && hold_min <= hold_max)) throw ContractViolation("bad hold range");
    if (!(gap_min > 0.0 && gap_min <= gap_max)) throw ContractViolation("bad gap range");
}

double TeacherProfile::salience_for(NegationType t) const {
    auto it = salience.find(t);
    return it == salience.end() ? 0.4 : it->second;
}

const Distribution<std::string>& TeacherProfile::words_for(NegationType t) const {
    static const Distribution<std::string> generic = word_dist({{"no", 5}, {"not", 3}, {"don't", 2}});
    auto it = words.find(t);
    return it == words.end() ? generic : it->second;
}

double TeacherProfile::word_salience_probability(NegationType t, const std::string& word) const {
    const double p = salience_for(t);
    auto ws = word_salience.find(t);
    if (ws == word_salience.end() || ws->second.empty()) return p;
    auto factor = [&](const std::string& w) {
        auto f = ws->second.find(w);
        return f == ws->second.end() ? p : f->second;
    };
    const auto& dist = words_for(t);
    double mean = 0.0;
    for (const auto& [w, c] : dist.weights) mean += dist.probability(w) * factor(w);
    if (mean <= 0.0) return p;
    return std::min(1.0, p / mean * factor(word));
}

// ---------------------------------------------------------------------------
// Templates

namespace {

enum class WordClass { Interjection, Particle, Auxiliary };

WordClass word_class(const std::string& w) {
    if (w == "no" || w == "nono") return WordClass::Interjection;
    if (w == "not" || w == "never" || w == "neither") return WordClass::Particle;
    return WordClass::Auxiliary;
}

struct TemplateSet {
    std::vector<const char*> interjection;
    std::vector<const char*> particle;
    std::vector<const char*> auxiliary;

    const std::vector<const char*>& for_class(WordClass c) const {
        const std::vector<const char*>* pick = &auxiliary;
        if (c == WordClass::Interjection) pick = &interjection;
        if (c == WordClass::Particle) pick = &particle;
        if (!pick->empty()) return *pick;
        if (!interjection.empty()) return interjection;
        return particle.empty() ? auxiliary : particle;
    }
};

const TemplateSet& generic_templates() {
    static const TemplateSet t{{"{neg} thank you", "oh {neg} the {obj}"},
                               {"{neg} that", "{neg} the {obj}"},
                               {"i {neg} know", "you {neg} see it"}};
    return t;
}

const std::map<NegationType, TemplateSet>& template_bank() {
    static const std::map<NegationType, TemplateSet> bank{
        {NT::Prohibition,
         {{"{neg} leave it", "{neg} hands off", "{neg} that one stays here",
           "oh {neg} leave the {obj} alone", "{neg} put your hand down"},
          {"{neg} that one", "{neg} the {obj}", "{neg} for you", "{neg} now"},
          {"you {neg} touch that", "you {neg} have the {obj}", "you {neg} take it",
           "you {neg} grab the {obj}"}}},
        {NT::Disallowance,
         {{"{neg} that is forbidden", "{neg} the {obj} is forbidden", "{neg} that is off limits"},
          {"you are {neg} allowed to have it", "you are {neg} allowed to take the {obj}",
           "that is {neg} allowed"},
          {"you {neg} have that one", "you {neg} play with the {obj}"}}},
        {NT::NII,
         {{"oh {neg} you hate the {obj}", "{neg} you dislike it", "{neg} that is yucky for you"},
          {"{neg} your favourite", "{neg} the {obj} then", "{neg} keen on it"},
          {"you {neg} like the {obj}", "you {neg} want it", "you {neg} like that one"}}},
        {NT::NMQ,
         {{"{neg} you hate it", "{neg} is it horrible", "oh {neg} is the {obj} bad"},
          {"{neg} the {obj}", "{neg} that one then", "you do {neg} like it"},
          {"{neg} you like the {obj}", "{neg} you want it", "{neg} you like that one"}}},
        {NT::TFD,
         {{"{neg} this is a {obj}", "{neg} it is a {obj}", "{neg} that is the {obj}"},
          {"that is {neg} right this is a {obj}", "{neg} quite it is a {obj}"},
          {"it {neg} that one it is a {obj}"}}},
        {NT::TFN,
         {{"{neg} {obj} here"},
          {"this is {neg} a {obj}", "that is {neg} the {obj}"},
          {"it {neg} a {obj}", "you {neg} seen the {obj}"}}},
        {NT::NTQ,
         {{"you like the {obj} {neg}"},
          {"nice {neg}"},
          {"you like it {neg} you", "it is a {obj} {neg} it", "that is nice {neg} it"}}},
        {NT::NegAgreement,
         {{"{neg} you are right", "{neg} exactly"},
          {"{neg} me", "{neg} really"},
          {"you {neg} either"}}},
        {NT::MotDepAssertion,
         {{"{neg} you are grumpy"}, {"{neg} happy"}, {"you {neg} want to play"}}},
        {NT::NegPerspAssertion,
         {{"{neg} i would not"}, {"i would {neg} like it"}, {"i {neg} like it either"}}},
        {NT::NegImperative,
         {{"{neg} look at me"}, {"{neg} that way"}, {"{neg} be sad"}}},
    };
    return bank;
}

// A leading '*' marks the word a speaker would usually stress.
const std::vector<const char*>& label_templates() {
    static const std::vector<const char*> t{
        "this is a *{obj}",     "look a *{obj}",        "*{obj}",          "a *{obj}",
        "the *{obj}",           "do you like the *{obj}", "here is the *{obj}", "what is *this",
        "*look at this",        "it is the *{obj}",     "can you see the *{obj}", "here you *go",
        "that is a *{obj}",     "the *{obj} again",     "what about the *{obj}", "*okay"};
    return t;
}

const std::vector<const char*>& approval_templates() {
    static const std::vector<const char*> t{
        "*yes take it", "*yes good",   "*good robot",       "*yes you like the {obj}",
        "*yes",         "*good",       "well *done",        "*yes the {obj}",
        "*good take the {obj}", "that is *nice", "*yes you can have it"};
    return t;
}

std::vector<std::string> tokens_of(const char* tmpl) {
    std::vector<std::string> out;
    std::istringstream ss(tmpl);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

// Baseline prosody for an unstressed word.
Word plain_word(const std::string& text, Rng& rng) {
    Word w;
    w.text = text;
    w.f0_max = rng.uniform(140.0, 220.0);
    w.energy_max = rng.uniform(0.3, 0.6);
    w.duration = 0.12 + 0.045 * static_cast<double>(text.size()) + rng.uniform(0.0, 0.1);
    return w;
}

// Lifts word `idx` above every other word on all three features.
void stress(std::vector<Word>& ws, std::size_t idx, Rng& rng) {
    double mf = 0.0, me = 0.0, md = 0.0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (i == idx) continue;
        mf = std::max(mf, ws[i].f0_max);
        me = std::max(me, ws[i].energy_max);
        md = std::max(md, ws[i].duration);
    }
    if (mf == 0.0) return;  // single word
    ws[idx].f0_max = mf * rng.uniform(1.08, 1.35);
    ws[idx].energy_max = me * rng.uniform(1.08, 1.35);
    ws[idx].duration = md * rng.uniform(1.05, 1.25);
}

}  // namespace

Utterance render_utterance(UtteranceKind kind, const TeacherProfile& profile, Rng& rng,
                           std::optional<ObjectId> topic, PlainStyle style) {
    const ObjectId obj = topic ? *topic : kAllObjects[rng.below(kAllObjects.size())];
    std::vector<std::string> toks;
    std::optional<std::size_t> neg_pos;
    std::string neg_word;

    if (kind) {
        if (!is_human_type(*kind)) throw ContractViolation("render_utterance needs a human type");
        neg_word = profile.words_for(*kind).sample(rng);
        auto it = template_bank().find(*kind);
        const TemplateSet& set = it == template_bank().end() ? generic_templates() : it->second;
        const auto& options = set.for_class(word_class(neg_word));
        toks = tokens_of(options[rng.below(options.size())]);
    } else {
        const auto& options = style == PlainStyle::Approval ? approval_templates() : label_templates();
        toks = tokens_of(options[rng.below(options.size())]);
    }

    std::vector<Word> ws;
    std::optional<std::size_t> marked;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        std::string text = toks[i];
        if (text.size() > 1 && text[0] == '*') {
            text.erase(0, 1);
            marked = i;
        }
        if (text == "{neg}") {
            text = neg_word;
            neg_pos = i;
        } else if (text == "{obj}") {
            text = std::string(to_string(obj));
        }
        ws.push_back(plain_word(text, rng));
    }

    std::size_t salient = 0;
    auto random_other = [&](std::optional<std::size_t> avoid) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < ws.size(); ++i)
            if (!avoid || i != *avoid) idx.push_back(i);
        return idx.empty() ? std::size_t{0} : idx[rng.below(idx.size())];
    };
    if (neg_pos) {
        salient = rng.bernoulli(profile.word_salience_probability(*kind, neg_word)) ? *neg_pos
                                                                                    : random_other(neg_pos);
    } else {
        salient = (marked && rng.bernoulli(profile.stress_marked)) ? *marked : random_other(marked);
    }
    stress(ws, salient, rng);

    Utterance u;
    u.words = std::move(ws);
    u.neg_type = kind;
    u.t_start = 0.0;
    for (const auto& w : u.words) u.t_end += w.duration;
    return u;
}

// ---------------------------------------------------------------------------
// Prohibition episodes

std::int64_t ProhibitionPlan::end_tick() const {
    std::int64_t end = utterance_end;
    for (const auto& p : pushes) end = std::max(end, p.second);
    return end;
}

ProhibitionPlan plan_prohibition(TemporalRelation relation, const TeacherProfile& profile,
                                 std::int64_t earliest, Rng& rng) {
    constexpr std::int64_t m = 3;  // minimum separation, ticks
    const std::int64_t max_gap = seconds_to_ticks(kDefaultMaxGap);

    const NegationType type =
        rng.bernoulli(profile.disallowance_share) ? NT::Disallowance : NT::Prohibition;
    Utterance u = render_utterance(type, profile, rng);
    // Short utterances are stretched so every relation has room; uniform scaling keeps salience.
    double total = u.t_end - u.t_start;
    if (total < 0.5) {
        for (auto& w : u.words) w.duration *= 0.5 / total;
        total = 0.0;
        for (const auto& w : u.words) total += w.duration;
    }
    const std::int64_t L = std::max<std::int64_t>(15, seconds_to_ticks(total));

    auto push_len = [&] {
        return std::max<std::int64_t>(m + 1, seconds_to_ticks(rng.uniform(profile.push_min, profile.push_max)));
    };
    auto gap = [&] { return rng.between(m, max_gap - m); };

    const std::int64_t a = 0, b = L;
    std::vector<std::pair<std::int64_t, std::int64_t>> pushes;
    switch (relation) {
        case TemporalRelation::NoPush: break;
        case TemporalRelation::BeforePush: {
            const std::int64_t s = b + gap();
            pushes.push_back({s, s + push_len()});
            break;
        }
        case TemporalRelation::AfterPush: {
            const std::int64_t e = a - gap();
            pushes.push_back({e - push_len(), e});
            break;
        }
        case TemporalRelation::BetweenPushes: {
            const std::int64_t e1 = a - gap();
            pushes.push_back({e1 - push_len(), e1});
            const std::int64_t s2 = b + gap();
            pushes.push_back({s2, s2 + push_len()});
            break;
        }
        case TemporalRelation::DuringPush:
            pushes.push_back({a - rng.between(m, 15), b + rng.between(m, 15)});
            break;
        case TemporalRelation::OverlapBeforeAndAfter: {
            const std::int64_t len = std::min(push_len(), L - 2 * m);
            const std::int64_t s = a + rng.between(m, L - m - len);
            pushes.push_back({s, s + len});
            break;
        }
        case TemporalRelation::OverlapBefore: {
            const std::int64_t s = a + rng.between(m, L - m);
            pushes.push_back({s, std::max(b + m, s + push_len())});
            break;
        }
        case TemporalRelation::OverlapAfter: {
            const std::int64_t e = a + rng.between(m, L - m);
            pushes.push_back({std::min(a - m, e - push_len()), e});
            break;
        }
        case TemporalRelation::DuringSeveralPushes: {
            const std::int64_t e1 = a + rng.between(m, L - 2 * m);
            const std::int64_t s2 = rng.between(e1 + m, b - m);
            pushes.push_back({std::min(a - m, e1 - push_len()), e1});
            pushes.push_back({s2, std::max(b + m, s2 + push_len())});
            break;
        }
    }

    std::int64_t first = a;
    for (const auto& p : pushes) first = std::min(first, p.first);
    const std::int64_t shift = earliest - first;

    ProhibitionPlan plan;
    plan.relation = relation;
    plan.utterance_start = a + shift;
    plan.utterance_end = b + shift;
    for (const auto& p : pushes) plan.pushes.push_back({p.first + shift, p.second + shift});
    u.t_start = ticks_to_seconds(plan.utterance_start);
    u.t_end = ticks_to_seconds(plan.utterance_end);
    plan.utterance = std::move(u);

    std::vector<Interval> secs;
    for (const auto& p : plan.pushes) secs.push_back({ticks_to_seconds(p.first), ticks_to_seconds(p.second)});
    if (classify_relation({plan.utterance.t_start, plan.utterance.t_end}, secs) != relation)
        throw std::logic_error("prohibition plan does not realise " + std::string(to_string(relation)));
    return plan;
}

// ---------------------------------------------------------------------------
// Scripted teacher

ScriptedTeacher::ScriptedTeacher(TeacherProfile profile, SessionConfig session, std::uint64_t seed)
    : profile_(std::move(profile)), session_(std::move(session)), rng_(seed) {
    profile_.validate();
    session_.validate();
    rate_ = profile_.utterance_rate *
            rng_.uniform(1.0 - profile_.rate_variation, 1.0 + profile_.rate_variation);
    order_.assign(kAllObjects.begin(), kAllObjects.end());
    rng_.shuffle(order_);
    next_present_ = seconds_to_ticks(rng_.uniform(profile_.gap_min, profile_.gap_max));
    next_utterance_ = seconds_to_ticks(rng_.uniform(0.5, 2.0));
}

TeacherAction ScriptedTeacher::say_at(std::int64_t tick, Utterance u) {
    const double dur = u.t_end - u.t_start;
    const std::int64_t len = std::max<std::int64_t>(1, seconds_to_ticks(dur));
    u.t_start = ticks_to_seconds(tick);
    u.t_end = ticks_to_seconds(tick + len);
    busy_until_ = tick + len;
    return TeacherAction::say(std::move(u));
}

void ScriptedTeacher::manage_presentation(std::int64_t t, std::vector<TeacherAction>& out) {
    if (episode_end_ >= 0) return;
    if (presented_ && t >= hold_until_) {
        out.push_back(TeacherAction::withdraw());
        presented_.reset();
        next_present_ = t + seconds_to_ticks(rng_.uniform(profile_.gap_min, profile_.gap_max));
    } else if (!presented_ && t >= next_present_) {
        if (order_pos_ >= order_.size()) {
            const ObjectId last = order_.back();
            rng_.shuffle(order_);
            if (order_.front() == last) std::swap(order_.front(), order_.back());
            order_pos_ = 0;
        }
        presented_ = order_[order_pos_++];
        out.push_back(TeacherAction::present(*presented_));
        hold_until_ = t + seconds_to_ticks(rng_.uniform(profile_.hold_min, profile_.hold_max));
        episodes_this_presentation_ = 0;
    }
}

void ScriptedTeacher::maybe_start_episode(const Observable& obs) {
    const std::int64_t t = obs.tick;
    if (session_.scenario != Scenario::Prohibition || !presented_) return;
    if (!session_.forbidden.count(*presented_)) return;
    if (episodes_this_presentation_ >= profile_.episodes_per_presentation) return;
    if (obs.behavior != BehaviorId::Reaching || obs.presented != presented_) return;
    if (episode_end_ >= 0 || t < cooldown_until_) return;

    const TemporalRelation rel = profile_.prohibition_response.sample(rng_);
    const std::int64_t earliest =
        std::max(t + seconds_to_ticks(rng_.uniform(0.2, 0.8)), busy_until_);
    ProhibitionPlan plan = plan_prohibition(rel, profile_, earliest, rng_);
    // Episodes that would run past the end of the session are dropped whole.
    if (plan.end_tick() >= session_.total_ticks()) {
        episodes_this_presentation_ = profile_.episodes_per_presentation;
        return;
    }
    sampled_.push_back(rel);

    planned_.push_back({plan.utterance_start, TeacherAction::say(plan.utterance)});
    for (const auto& [s, e] : plan.pushes) {
        planned_.push_back({s, TeacherAction::push_start()});
        planned_.push_back({e, TeacherAction::push_end()});
    }
    std::stable_sort(planned_.begin(), planned_.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    busy_until_ = std::max(busy_until_, plan.utterance_end);
    episode_end_ = plan.end_tick();
    // Keep every other push clear of this utterance by more than the 4 s window.
    cooldown_until_ = episode_end_ + seconds_to_ticks(kDefaultMaxGap) + 6 +
                      seconds_to_ticks(rng_.uniform(0.0, 2.0));
    hold_until_ = std::max(hold_until_, episode_end_ + seconds_to_ticks(0.5));
    ++episodes_this_presentation_;
}

void ScriptedTeacher::maybe_speak(const Observable& obs, std::vector<TeacherAction>& out) {
    const std::int64_t t = obs.tick;
    if (episode_end_ >= 0 || t < busy_until_ || t < next_utterance_) return;

    UtteranceKind kind;
    if (pending_denial_) {
        kind = NT::TFD;
        pending_denial_ = false;
    } else {
        const auto& mix = obs.face == FacialExpression::Frown ? profile_.mix_on_frown : profile_.mix_default;
        kind = mix.sample(rng_);
    }
    PlainStyle style = PlainStyle::Label;
    if (!kind && obs.face == FacialExpression::Smile &&
        !(presented_ && session_.forbidden.count(*presented_)) && rng_.bernoulli(profile_.approval_share))
        style = PlainStyle::Approval;
    Utterance u = render_utterance(kind, profile_, rng_, presented_, style);
    const double dur = u.t_end - u.t_start;
    if (t + seconds_to_ticks(dur) >= session_.total_ticks()) return;
    out.push_back(say_at(t, std::move(u)));

    const double interval = 60.0 / rate_;
    const double gap = std::max(0.25, (interval - dur) * rng_.uniform(0.5, 1.5));
    next_utterance_ = busy_until_ + seconds_to_ticks(gap);
}

std::vector<TeacherAction> ScriptedTeacher::act(const Observable& obs) {
    std::vector<TeacherAction> out;
    const std::int64_t t = obs.tick;

    if (obs.robot_said) {
        bool mislabel = false;
        for (ObjectId o : kAllObjects)
            if (*obs.robot_said == to_string(o) && presented_ != o) mislabel = true;
        if (mislabel && rng_.bernoulli(profile_.denial_response)) pending_denial_ = true;
    }

    while (!planned_.empty() && planned_.front().first <= t) {
        out.push_back(std::move(planned_.front().second));
        planned_.pop_front();
    }
    if (episode_end_ >= 0 && t >= episode_end_ && planned_.empty()) {
        episode_end_ = -1;
        next_utterance_ = std::max(next_utterance_, t + seconds_to_ticks(rng_.uniform(0.3, 1.0)));
    }

    manage_presentation(t, out);
    maybe_start_episode(obs);
    maybe_speak(obs, out);
    return out;
}

// ---------------------------------------------------------------------------
// Profile files

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& v) {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw Error("not a number: '" + v + "'");
    return d;
}

UtteranceKind parse_kind(const std::string& s) {
    if (s == "none") return std::nullopt;
    return parse_negation_type(s);
}

std::string kind_name(const UtteranceKind& k) { return k ? to_string(*k) : "none"; }

void set_weight(std::map<std::string, double>& m, const std::string& k, double v) {
    if (v == 0.0) m.erase(k);
    else m[k] = v;
}

template <typename K>
void set_weight(Distribution<K>& d, const K& k, double v) {
    if (v == 0.0) d.weights.erase(k);
    else d.weights[k] = v;
}

}  // namespace

TeacherProfile TeacherProfile::parse(std::istream& is, const std::string& origin) {
    TeacherProfile p = prohibition_default();
    std::string line;
    int number = 0;
    bool seen_key = false;
    while (std::getline(is, line)) {
        ++number;
        const std::string where = origin + ":" + std::to_string(number) + ": ";
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(where + "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "base") {
                if (seen_key) throw Error("'base' must come before any other key");
                p = for_scenario(parse_scenario(val));
            } else if (key == "name") {
                p.name = val;
            } else if (key == "scenario") {
                p.scenario = parse_scenario(val);
            } else if (key == "utterance_rate") {
                p.utterance_rate = parse_number(val);
            } else if (key == "rate_variation") {
                p.rate_variation = parse_number(val);
            } else if (key.rfind("mix.frown.", 0) == 0) {
                set_weight(p.mix_on_frown, parse_kind(key.substr(10)), parse_number(val));
            } else if (key.rfind("mix.default.", 0) == 0) {
                set_weight(p.mix_default, parse_kind(key.substr(12)), parse_number(val));
            } else if (key.rfind("salience.", 0) == 0) {
                p.salience[parse_negation_type(key.substr(9))] = parse_number(val);
            } else if (key.rfind("words.", 0) == 0 || key.rfind("word_salience.", 0) == 0) {
                const bool is_words = key[4] == 's' && key[5] == '.';
                const std::string rest = key.substr(is_words ? 6 : 14);
                const auto dot = rest.find('.');
                if (dot == std::string::npos) throw Error("expected <type>.<word> in '" + key + "'");
                const NegationType t = parse_negation_type(rest.substr(0, dot));
                const std::string w = rest.substr(dot + 1);
                if (is_words) {
                    if (!p.words.count(t)) p.words[t] = p.words_for(t);
                    set_weight(p.words[t], w, parse_number(val));
                } else {
                    p.word_salience[t][w] = parse_number(val);
                }
            } else if (key == "disallowance_share") {
                p.disallowance_share = parse_number(val);
            } else if (key == "episodes_per_presentation") {
                const double v = parse_number(val);
                if (v != std::floor(v)) throw Error("episodes_per_presentation must be an integer");
                p.episodes_per_presentation = static_cast<int>(v);
            } else if (key == "approval_share") {
                p.approval_share = parse_number(val);
            } else if (key == "stress_marked") {
                p.stress_marked = parse_number(val);
            } else if (key == "denial_response") {
                p.denial_response = parse_number(val);
            } else if (key.rfind("prohibition_response.", 0) == 0) {
                p.prohibition_response.p[static_cast<std::size_t>(parse_relation(key.substr(21)))] =
                    parse_number(val);
            } else if (key == "push.min") {
                p.push_min = parse_number(val);
            } else if (key == "push.max") {
                p.push_max = parse_number(val);
            } else if (key == "presentation.hold_min") {
                p.hold_min = parse_number(val);
            } else if (key == "presentation.hold_max") {
                p.hold_max = parse_number(val);
            } else if (key == "presentation.gap_min") {
                p.gap_min = parse_number(val);
            } else if (key == "presentation.gap_max") {
                p.gap_max = parse_number(val);
            } else {
                throw Error("unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw Error(where + "not a number: '" + val + "'");
        } catch (const std::out_of_range&) {
            throw Error(where + "number out of range: '" + val + "'");
        } catch (const Error& e) {
            throw Error(where + e.what());
        }
        seen_key = true;
    }
    // Relation weights may be given as counts.
    double s = std::accumulate(p.prohibition_response.p.begin(), p.prohibition_response.p.end(), 0.0);
    if (s > 0.0)
        for (double& v : p.prohibition_response.p) v /= s;
    try {
        p.validate();
    } catch (const ContractViolation& e) {
        throw Error(origin + ": " + e.what());
    }
    return p;
}

TeacherProfile TeacherProfile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open profile " + path);
    return parse(in, path);
}

std::string TeacherProfile::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "base = " << to_string(scenario) << "\n";
    os << "name = " << name << "\n";
    os << "utterance_rate = " << utterance_rate << "\n";
    os << "rate_variation = " << rate_variation << "\n";
    // Start the mixes from scratch so the file fully determines them.
    for (const auto& [k, w] : for_scenario(scenario).mix_on_frown.weights)
        if (!mix_on_frown.weights.count(k)) os << "mix.frown." << kind_name(k) << " = 0\n";
    for (const auto& [k, w] : mix_on_frown.weights) os << "mix.frown." << kind_name(k) << " = " << w << "\n";
    for (const auto& [k, w] : for_scenario(scenario).mix_default.weights)
        if (!mix_default.weights.count(k)) os << "mix.default." << kind_name(k) << " = 0\n";
    for (const auto& [k, w] : mix_default.weights) os << "mix.default." << kind_name(k) << " = " << w << "\n";
    for (const auto& [t, v] : salience) os << "salience." << to_string(t) << " = " << v << "\n";
    for (const auto& [t, d] : words)
        for (const auto& [w, c] : d.weights) os << "words." << to_string(t) << "." << w << " = " << c << "\n";
    for (const auto& [t, m] : word_salience)
        for (const auto& [w, r] : m) os << "word_salience." << to_string(t) << "." << w << " = " << r << "\n";
    os << "disallowance_share = " << disallowance_share << "\n";
    os << "denial_response = " << denial_response << "\n";
    os << "approval_share = " << approval_share << "\n";
    os << "episodes_per_presentation = " << episodes_per_presentation << "\n";
    os << "stress_marked = " << stress_marked << "\n";
    for (TemporalRelation r : kAllRelations)
        os << "prohibition_response." << to_string(r) << " = " << prohibition_response[r] << "\n";
    os << "push.min = " << push_min << "\npush.max = " << push_max << "\n";
    os << "presentation.hold_min = " << hold_min << "\npresentation.hold_max = " << hold_max << "\n";
    os << "presentation.gap_min = " << gap_min << "\npresentation.gap_max = " << gap_max << "\n";
    return os.str();
}

}  // namespace negacq
