#pragma once

#include "hessval/zeta_profile.hpp"

#include <string>

namespace hessval {

// Profile CSV format: '#'-prefixed metadata lines ("# support=S, class=H_j^n"),
// a "s,value" header, then strictly increasing rows.  Floats are written
// with 17 significant digits so the round trip is lossless.
ZetaProfile load_profile_csv(const std::string& path);
void save_profile_csv(const ZetaProfile& z, const std::string& path);

std::string format_double(double v);  // 17 significant digits

}  // namespace hessval
