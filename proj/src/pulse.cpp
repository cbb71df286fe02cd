#include "latsq/pulse.hpp"

#include <stdexcept>

#include "json.hpp"

namespace latsq {

PulseSequence::PulseSequence(std::vector<Kick> kicks) : kicks_(std::move(kicks)) {
    double prev = 0.0;
    bool first = true;
    for (const auto& k : kicks_) {
        if (k.tau < 0.0) throw std::invalid_argument("PulseSequence: kick time < 0");
        if (!first && k.tau < prev)
            throw std::invalid_argument("PulseSequence: kick times must be non-decreasing");
        if (k.P < 0.0) throw std::invalid_argument("PulseSequence: kick strength < 0");
        prev = k.tau;
        first = false;
    }
}

double PulseSequence::total_strength() const {
    double s = 0.0;
    for (const auto& k : kicks_) s += k.P;
    return s;
}

PulseSequence PulseSequence::merged() const {
    std::vector<Kick> out;
    for (const auto& k : kicks_) {
        if (!out.empty() && out.back().tau == k.tau)
            out.back().P += k.P;
        else
            out.push_back(k);
    }
    return PulseSequence(std::move(out));
}

std::string PulseSequence::to_json() const {
    nlohmann::json j;
    j["kicks"] = nlohmann::json::array();
    for (const auto& k : kicks_) j["kicks"].push_back({{"tau", k.tau}, {"P", k.P}});
    return j.dump(2);
}

PulseSequence PulseSequence::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    std::vector<Kick> kicks;
    for (const auto& e : j.at("kicks"))
        kicks.push_back(Kick{e.at("tau").get<double>(), e.at("P").get<double>()});
    return PulseSequence(std::move(kicks));
}

PulseSequence single_kick(double P) { return PulseSequence({Kick{0.0, P}}); }

ThermalSpec::ThermalSpec(double s) : sigma(s) {
    if (s < 0.0) throw std::invalid_argument("ThermalSpec: sigma < 0");
}

}  // namespace latsq
