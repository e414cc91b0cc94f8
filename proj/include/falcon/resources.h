#ifndef FALCON_RESOURCES_H_
#define FALCON_RESOURCES_H_

#include <string_view>

// Data files shipped under data/, compiled into the library so that the
// binaries work without a data directory.
namespace falcon {
namespace resources {

std::string_view Stopwords();
std::string_view Lexicon();
std::string_view PlaceAllowlist();

}  // namespace resources
}  // namespace falcon

#endif  // FALCON_RESOURCES_H_
