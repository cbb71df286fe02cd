#pragma once

#include <string>
#include <vector>

namespace latsq {

struct Kick {
    double tau = 0.0;  // dimensionless time (engine-specific unit)
    double P = 1.0;    // dimensionless kick strength

    friend bool operator==(const Kick&, const Kick&) = default;
};

// Ordered kick schedule. Times are non-decreasing; coincident kicks are legal
// and act as one kick whose strengths add.
class PulseSequence {
public:
    PulseSequence() = default;
    explicit PulseSequence(std::vector<Kick> kicks);

    const std::vector<Kick>& kicks() const { return kicks_; }
    bool empty() const { return kicks_.empty(); }
    std::size_t size() const { return kicks_.size(); }
    double total_strength() const;
    double last_time() const { return kicks_.empty() ? 0.0 : kicks_.back().tau; }

    // Coalesce kicks at exactly equal times by adding strengths.
    PulseSequence merged() const;

    // {"kicks":[{"tau":...,"P":...},...]}
    std::string to_json() const;
    static PulseSequence from_json(const std::string& text);

private:
    std::vector<Kick> kicks_;
};

// A single kick of strength P at tau = 0.
PulseSequence single_kick(double P = 1.0);

// Temperature expressed as the dimensionless width of the initial Gaussian
// velocity (classical) or momentum (quantum) distribution. sigma = 0 is the
// zero-temperature delta-distribution limit.
struct ThermalSpec {
    double sigma = 0.0;

    explicit ThermalSpec(double s);
    ThermalSpec() = default;
};

}  // namespace latsq
