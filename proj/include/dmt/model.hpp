#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dmt/errors.hpp"

namespace dmt {

// Signal coefficients theta_1..theta_m. Entries must be finite.
class SignalSequence {
  public:
    explicit SignalSequence(std::vector<double> values);

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t k) const { return values_[k]; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }

    // Sum of squared entries, plain left-to-right accumulation.
    [[nodiscard]] double squared_norm() const;

    static SignalSequence zeros(std::size_t m);

    friend bool operator==(const SignalSequence&, const SignalSequence&) = default;

  private:
    std::vector<double> values_;
};

// Singular values b_1 >= b_2 >= ... >= b_m > 0 of the (unknown) operator.
class OperatorSpectrum {
  public:
    explicit OperatorSpectrum(std::vector<double> values);

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t k) const { return values_[k]; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }

    friend bool operator==(const OperatorSpectrum&, const OperatorSpectrum&) = default;

  private:
    std::vector<double> values_;
};

// Finite ordered dictionary of candidate spectra sharing a common length.
class Dictionary {
  public:
    explicit Dictionary(std::vector<OperatorSpectrum> members);

    // Convenience for building a dictionary from a list that may repeat
    // members; duplicates collapse to the first occurrence.
    static Dictionary deduplicated(std::vector<OperatorSpectrum> members);

    [[nodiscard]] std::size_t size() const { return members_.size(); }
    [[nodiscard]] std::size_t common_length() const { return common_length_; }
    [[nodiscard]] const OperatorSpectrum& operator[](std::size_t i) const { return members_[i]; }
    [[nodiscard]] const std::vector<OperatorSpectrum>& members() const { return members_; }

  private:
    std::vector<OperatorSpectrum> members_;
    std::size_t common_length_ = 0;
};

// Noise level and base seed of the sampling model.
struct NoiseModel {
    double epsilon = 1.0;
    std::uint64_t seed = 0;
};

struct ObservationProvenance {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

struct Observation {
    std::vector<double> y;
    std::optional<ObservationProvenance> provenance;

    [[nodiscard]] std::size_t size() const { return y.size(); }
};

// Draws y_k = b_k * theta_k + epsilon * xi_k with xi from the deterministic
// stream (noise.seed, stream_id). Pure: identical inputs give bit-identical
// output regardless of call order or threading.
Observation sample_observation(const SignalSequence& theta, const OperatorSpectrum& b,
                               const NoiseModel& noise, std::uint64_t stream_id = 0);

// `count` i.i.d. standard normal variates from substream (seed, stream_id).
// Distinct stream ids give statistically independent, reproducible streams.
std::vector<double> gaussian_stream(std::uint64_t seed, std::uint64_t stream_id,
                                    std::size_t count);

namespace detail {
void require_same_length(std::size_t a, std::size_t b, const char* what);
}

}  // namespace dmt
