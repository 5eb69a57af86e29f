// Copyright 2026 The tcpa-loopctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TCPA_JSON_IO_HPP_
#define TCPA_JSON_IO_HPP_

#include <string>

#include "json.hpp"
#include "tcpa/poly.hpp"

namespace tcpa::io {

/// [{"rows":[{"a":[...],"b":...}, ...]}, ...]
nlohmann::json domain_to_json(const poly::DomainUnion& d);
poly::DomainUnion domain_from_json(const nlohmann::json& j, std::size_t dim, const std::string& where);

nlohmann::json literal_to_json(const poly::Literal& lit);

}  // namespace tcpa::io

#endif  // TCPA_JSON_IO_HPP_
