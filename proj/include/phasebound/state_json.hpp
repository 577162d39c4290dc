#ifndef PHASEBOUND_STATE_JSON_HPP
#define PHASEBOUND_STATE_JSON_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "state_space.hpp"

namespace phasebound
{

/// {"offset": int, "re": [...], "im": [...]}; "im" may be omitted for real states.
inline FockState state_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw DomainError("state JSON must be an object");
    if (!j.contains("re") || !j.at("re").is_array())
        throw DomainError("state JSON needs an \"re\" array");
    long long offset = 0;
    if (j.contains("offset")) {
        if (!j.at("offset").is_number_integer())
            throw DomainError("state JSON \"offset\" must be an integer");
        offset = j.at("offset").get<long long>();
    }
    if (offset < 0)
        throw NegativeIndex("state JSON \"offset\" must be >= 0");

    const auto& re = j.at("re");
    std::vector<complex> amps(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
        if (!re[i].is_number())
            throw DomainError("state JSON \"re\" entries must be numbers");
        amps[i].real(re[i].get<double>());
    }
    if (j.contains("im")) {
        const auto& im = j.at("im");
        if (!im.is_array() || im.size() != re.size())
            throw DomainError("state JSON \"im\" must be an array as long as \"re\"");
        for (std::size_t i = 0; i < im.size(); ++i) {
            if (!im[i].is_number())
                throw DomainError("state JSON \"im\" entries must be numbers");
            amps[i].imag(im[i].get<double>());
        }
    }
    return FockState(static_cast<std::size_t>(offset), std::move(amps));
}

inline FockState parse_state(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(std::string("malformed state JSON: ") + e.what());
    }
    return state_from_json(j);
}

inline nlohmann::json state_to_json(const FockState& state)
{
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (const auto& a : state.amplitudes()) {
        re.push_back(a.real());
        im.push_back(a.imag());
    }
    return {{"offset", state.offset()}, {"re", re}, {"im", im}};
}

} // namespace phasebound

#endif // PHASEBOUND_STATE_JSON_HPP
