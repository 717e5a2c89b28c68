#pragma once

#include <string>

namespace sh {

// alpha of the point interaction; Friedrichs is the alpha = +inf member, kept symbolic
class PointInteraction {
public:
    PointInteraction() = default;
    explicit PointInteraction(double alpha);
    static PointInteraction friedrichs();

    bool is_friedrichs() const { return friedrichs_; }
    double alpha() const;
    // Robin coefficient beta = 4 pi alpha in f'(0) = beta f(0)
    double beta() const;
    // a = -1/(4 pi alpha); +inf at alpha = 0, 0 at Friedrichs
    double scattering_length() const;
    std::string label() const;
    bool operator==(const PointInteraction& o) const
    {
        return friedrichs_ == o.friedrichs_ && (friedrichs_ || alpha_ == o.alpha_);
    }

private:
    double alpha_ = 0;
    bool friedrichs_ = false;
};

} // namespace sh
