#pragma once

#include <string>

#include "json.hpp"

#include "hs/atomic.hpp"
#include "hs/balls.hpp"
#include "hs/czd.hpp"
#include "hs/hajlasz.hpp"
#include "hs/space.hpp"
#include "hs/whitney.hpp"

namespace hs::io {

using nlohmann::json;

/// Space file: {"n": int, "metric": "matrix"|"euclidean",
///   "distances": [[...]] or "coords": [[...]], "measure": [...],
///   "edges": [[i,j],...]}
Space space_from_json(const json& j);
json space_to_json(const Space& space);
Space load_space(const std::string& path);
void save_space(const Space& space, const std::string& path);

/// Field CSV: header "id,value", ids 0..n-1 complete.
ScalarField load_field(const std::string& path, int n);
void save_field(const ScalarField& f, const std::string& path);

json certificate_to_json(const HajlaszCertificate& cert);
json cover_to_json(const WhitneyCover& cover);
json cz_to_json(const CzDecomposition& dec, const CzReport& report);
json atomic_to_json(const AtomicDecomposition& dec);

void write_text(const std::string& path, const std::string& text);

/// Fixed-format float used everywhere outputs must be byte-stable.
std::string fmt(double v);

}  // namespace hs::io
