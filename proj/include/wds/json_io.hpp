#pragma once

// JSON documents exchanged by the CLI. Integers are decimal strings and
// rationals "p/q" strings so nothing loses precision.

#include "wds/bounds.hpp"
#include "wds/form.hpp"
#include "wds/search.hpp"

#include <json.hpp>

#include <optional>
#include <string_view>

namespace wds {

using Json = nlohmann::json;

Json form_to_json(const Form& f);
Form form_from_json(const Json& j);

/// Text grammar or the JSON form document, whichever `text` holds.
Form read_form(std::string_view text, std::optional<unsigned> n_override = std::nullopt);

Json rationals_to_json(std::span<const Rational> v);
Json path_to_json(const Path& p);
Path path_from_json(const Json& j, unsigned n);

Json config_to_json(const SearchConfig& c);
SearchConfig config_from_json(const Json& j);

Json witness_to_json(const Witness& w);
Witness witness_from_json(const Json& j, unsigned n);

Json certificate_to_json(const Certificate& c);
/// Throws CertificateError when the document is not a certificate.
Certificate certificate_from_json(const Json& j);

Json bound_report_to_json(const BoundReport& r);

}  // namespace wds
