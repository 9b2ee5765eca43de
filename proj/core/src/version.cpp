#include "nnstne/version.hpp"

namespace nnstne {

const char* version() {
#ifdef NNSTNE_VERSION_STRING
  return NNSTNE_VERSION_STRING;
#else
  return "0.0.0";
#endif
}

}  // namespace nnstne
