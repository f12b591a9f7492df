// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

namespace wxvis {

/// Attenuation of clear air at visible wavelengths, m^-1. Exposed as the
/// default for the Clear condition and overridable through configuration.
inline constexpr double kClearSigma = 0.00015;

/// -ln(0.02): ties the 2% contrast threshold to the visibility distance.
/// Display-rounded as 3.912 in most sources.
inline constexpr double kKoschmiederConstant = 3.912023005428146;

/// Real refractive index of water droplets at visible wavelengths.
inline constexpr double kWaterRefractiveIndex = 1.333;

enum class WeatherKind {
    Clear,
    Rain,
    SnowWet,
    SnowDry,
    FogHeavyAdvection,
    FogModerateRadiation,
    CustomSigma,
};

/// A weather condition descriptor, resolvable to an attenuation coefficient.
struct WeatherCondition {
    WeatherKind kind = WeatherKind::Clear;
    double rate_mm_per_h = 0.0;   // rain / snow precipitation rate
    double wavelength_nm = 550.0; // visible midrange default
    double custom_sigma = 0.0;    // m^-1, CustomSigma only

    /// Parses the CLI grammar `kind[:rate[:wavelength_nm]]`, e.g. "clear",
    /// "rain:8", "snow-dry:4:550", "fog-ha", "sigma:0.06".
    /// Throws ConfigError on unknown kinds or malformed numbers.
    static WeatherCondition parse(std::string_view token);

    /// Round-trips through parse().
    std::string to_token() const;

    /// Filesystem-safe label, e.g. "rain8", "snow_dry4", "fog_ha".
    std::string label() const;
};

std::string_view to_string(WeatherKind kind);

/// sigma in m^-1 plus the condition it was derived from.
struct AttenuationCoefficient {
    double sigma = 0.0;
    WeatherCondition condition;
};

/// C_r = exp(-sigma * distance). Rejects negative inputs.
double contrast_ratio(double sigma, double distance_m);

/// Distance at which the contrast ratio falls to 2%. Rejects sigma <= 0
/// (zero attenuation means unbounded visibility).
double koschmieder_distance(double sigma);

/// Rain power law sigma = 1.17 * R^0.65 km^-1, returned in m^-1.
AttenuationCoefficient sigma_rain(double rate_mm_per_h);

enum class SnowType { Wet, Dry };

/// Wavelength-dependent `a` coefficient of the snow power law (km^-1 basis).
double snow_coefficient_a(SnowType type, double wavelength_nm);

/// Snow power law sigma = a(lambda) * S^b km^-1 (b = 0.72 wet, 1.38 dry),
/// returned in m^-1.
AttenuationCoefficient sigma_snow(double rate_mm_per_h, SnowType type,
                                  double wavelength_nm = 550.0);

/// Modified gamma droplet-size distribution N(r) = a r^alpha exp(-b r),
/// with r in micrometers and N in cm^-3 per micrometer of radius.
struct FogProfile {
    double alpha = 0.0;
    double a = 0.0;
    double b = 0.0;                      // um^-1
    double total_number_cm3 = 0.0;       // expected integral of N(r)
    double liquid_water_g_m3 = 0.0;      // descriptive only
    double mode_radius_um = 0.0;         // descriptive only
    double refractive_index_real = kWaterRefractiveIndex;

    static FogProfile heavy_advection();
    static FogProfile moderate_radiation();

    /// Closed form a * Gamma(alpha+1) / b^(alpha+1).
    double number_density_integral() const;
    /// True when the closed-form integral matches total_number_cm3 to 0.1%.
    bool consistent() const;
};

/// N(r) for r >= 0 in micrometers.
double gamma_density(double radius_um, const FogProfile& profile);

/// Fog attenuation from Mie theory: the extinction cross-section
/// Q(2 pi r / lambda, n') * pi r^2 integrated against the droplet-size
/// distribution. Integration runs in micrometer units; one constant folds
/// the um^2 -> cm^2 area conversion and the cm^-1 -> m^-1 path conversion.
/// Throws std::invalid_argument on an inconsistent profile and NumericError
/// if the quadrature cannot reach its tolerance.
AttenuationCoefficient sigma_fog(const FogProfile& profile, double wavelength_nm = 550.0);

/// Dispatches a condition to its per-kind sigma operation.
AttenuationCoefficient resolve_condition(const WeatherCondition& condition,
                                         double clear_sigma = kClearSigma);

} // namespace wxvis
