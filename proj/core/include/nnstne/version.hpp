#pragma once

namespace nnstne {

/// Library/tool version string.
const char* version();

}  // namespace nnstne
