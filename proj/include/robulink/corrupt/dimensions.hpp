/**
 * @file dimensions.hpp
 * @brief The 33 corruption dimensions, their pipeline step and low-level group,
 *        and the calibrated per-strength parameters.
 */
#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace robulink {

class CorruptionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kDimensionCount = 33;

/// Position in the capture-to-model link where a corruption arises.
enum class Step { EI, CI, AD, SE, CT, RD, EP };
/// Low-level attribute family.
enum class Group { Blur, Luminance, Chrominance, Spatial, Noise, Compression, Wild };

inline constexpr std::array<Step, 7> kAllSteps = {Step::EI, Step::CI, Step::AD, Step::SE,
                                                  Step::CT, Step::RD, Step::EP};
inline constexpr std::array<Group, 7> kAllGroups = {Group::Blur,    Group::Luminance,   Group::Chrominance,
                                                    Group::Spatial, Group::Noise,       Group::Compression,
                                                    Group::Wild};

/// `None` is the identity level used for testing; the calibrated levels are Low/Mid/High.
enum class Strength { None, Low, Mid, High };

inline constexpr std::array<Strength, 3> kCalibratedStrengths = {Strength::Low, Strength::Mid, Strength::High};

struct DimensionInfo {
    int id;
    std::string_view slug;
    std::string_view title;
    Step step;
    Group group;
    /// Synthetic stand-in for a corruption that is normally captured physically.
    bool synthetic_wild;
};

const DimensionInfo& dimension_info(int id);
std::span<const DimensionInfo> all_dimensions();

/// Accepts a numeric id ("16") or slug ("jpeg").
std::optional<int> parse_dimension(std::string_view text);

std::string_view to_string(Step s);
std::string_view to_string(Group g);
std::string_view to_string(Strength s);
std::string_view step_title(Step s);
std::string_view group_title(Group g);
std::optional<Strength> parse_strength(std::string_view text);
std::optional<Step> parse_step(std::string_view text);
std::optional<Group> parse_group(std::string_view text);

/// Concrete operator parameters for one (dimension, strength) cell.
/// `value` is the main severity knob; `aux` is used only where a dimension
/// has a second parameter (dark illumination noise, lens shaking blur length,
/// block size for the channel-transmission dimensions).
struct StrengthParams {
    double value = 0.0;
    double aux = 0.0;
};

/// Parameters for a calibrated strength; throws for Strength::None.
StrengthParams strength_params(int dimension, Strength strength);

}  // namespace robulink
