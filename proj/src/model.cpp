#include "dmt/model.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "dmt/rng.hpp"

namespace dmt {

namespace detail {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a) +
                             " vs " + std::to_string(b) + ")");
    }
}

}  // namespace detail

SignalSequence::SignalSequence(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw DomainError("SignalSequence: length must be >= 1");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw DomainError("SignalSequence: non-finite entry at index " + std::to_string(k));
        }
    }
}

double SignalSequence::squared_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return s;
}

SignalSequence SignalSequence::zeros(std::size_t m) {
    return SignalSequence(std::vector<double>(m, 0.0));
}

OperatorSpectrum::OperatorSpectrum(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw DomainError("OperatorSpectrum: length must be >= 1");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!(values_[k] > 0.0) || !std::isfinite(values_[k])) {
            throw DomainError("OperatorSpectrum: entries must be positive and finite (index " +
                              std::to_string(k) + ")");
        }
        if (k > 0 && values_[k] > values_[k - 1]) {
            throw DomainError("OperatorSpectrum: entries must be non-increasing (index " +
                              std::to_string(k) + ")");
        }
    }
}

Dictionary::Dictionary(std::vector<OperatorSpectrum> members) : members_(std::move(members)) {
    if (members_.empty()) {
        throw DomainError("Dictionary: must contain at least one member");
    }
    common_length_ = members_.front().size();
    for (std::size_t i = 0; i < members_.size(); ++i) {
        detail::require_same_length(members_[i].size(), common_length_, "Dictionary");
        for (std::size_t j = 0; j < i; ++j) {
            if (members_[i] == members_[j]) {
                throw DomainError("Dictionary: members " + std::to_string(j) + " and " +
                                  std::to_string(i) + " are identical");
            }
        }
    }
}

Dictionary Dictionary::deduplicated(std::vector<OperatorSpectrum> members) {
    std::vector<OperatorSpectrum> unique;
    for (auto& m : members) {
        bool seen = false;
        for (const auto& u : unique) {
            if (u == m) {
                seen = true;
                break;
            }
        }
        if (!seen) unique.push_back(std::move(m));
    }
    return Dictionary(std::move(unique));
}

Observation sample_observation(const SignalSequence& theta, const OperatorSpectrum& b,
                               const NoiseModel& noise, std::uint64_t stream_id) {
    detail::require_same_length(theta.size(), b.size(), "sample_observation");
    if (!(noise.epsilon > 0.0)) {
        throw DomainError("sample_observation: epsilon must be > 0");
    }
    const std::uint64_t key = rng::stream_key(noise.seed, stream_id);
    Observation obs;
    obs.y.resize(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        obs.y[k] = b[k] * theta[k] + noise.epsilon * rng::normal_at(key, k);
    }
    obs.provenance = ObservationProvenance{noise.epsilon, noise.seed, stream_id};
    return obs;
}

std::vector<double> gaussian_stream(std::uint64_t seed, std::uint64_t stream_id,
                                    std::size_t count) {
    const std::uint64_t key = rng::stream_key(seed, stream_id);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = rng::normal_at(key, i);
    }
    return out;
}

}  // namespace dmt
