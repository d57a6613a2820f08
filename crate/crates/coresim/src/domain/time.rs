//! Simulated time and the five time-of-day categories used by the
//! mobility model and the analytics.

use chrono::{DateTime, Timelike, Utc};
use serde::{Deserialize, Serialize};

/// A point in simulated time.
///
/// Carries both the exact offset from scenario start (for arithmetic) and
/// the derived wall-clock datetime (for time-of-day logic and human-readable
/// logs). Instants are produced by [`SimClock::at`] so the two fields stay
/// consistent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimInstant {
    /// Seconds since scenario start.
    pub offset_s: f64,
    /// Wall-clock datetime: scenario start plus the offset.
    pub wall: DateTime<Utc>,
}

impl SimInstant {
    /// Hour of day (0..24) of the wall clock.
    pub fn hour_of_day(&self) -> u32 {
        self.wall.hour()
    }
}

impl PartialOrd for SimInstant {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.offset_s.partial_cmp(&other.offset_s)
    }
}

/// Converts simulated offsets into [`SimInstant`]s for a given scenario
/// start date.
#[derive(Debug, Clone, Copy)]
pub struct SimClock {
    start: DateTime<Utc>,
}

impl SimClock {
    pub fn new(start: DateTime<Utc>) -> Self {
        Self { start }
    }

    pub fn start(&self) -> DateTime<Utc> {
        self.start
    }

    /// Instant `offset_s` seconds after scenario start.
    ///
    /// Sub-second offsets are kept to nanosecond resolution in the wall
    /// clock; the float offset remains the exact value.
    pub fn at(&self, offset_s: f64) -> SimInstant {
        debug_assert!(offset_s >= 0.0 && offset_s.is_finite());
        let nanos = (offset_s * 1e9).round() as i64;
        SimInstant {
            offset_s,
            wall: self.start + chrono::Duration::nanoseconds(nanos),
        }
    }
}

/// The five time-of-day categories. Every wall-clock hour maps to exactly
/// one category (half-open boundaries):
///
/// - morning   [06:00, 11:00)
/// - lunch     [11:00, 14:00)
/// - afternoon [14:00, 18:00)
/// - evening   [18:00, 22:00)
/// - night     [22:00, 06:00)
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeCategory {
    Morning,
    Lunch,
    Afternoon,
    Evening,
    Night,
}

impl TimeCategory {
    pub const ALL: [TimeCategory; 5] = [
        TimeCategory::Morning,
        TimeCategory::Lunch,
        TimeCategory::Afternoon,
        TimeCategory::Evening,
        TimeCategory::Night,
    ];

    /// Category owning the given hour of day (0..24).
    pub fn from_hour(hour: u32) -> Self {
        match hour {
            6..=10 => TimeCategory::Morning,
            11..=13 => TimeCategory::Lunch,
            14..=17 => TimeCategory::Afternoon,
            18..=21 => TimeCategory::Evening,
            _ => TimeCategory::Night,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TimeCategory::Morning => "morning",
            TimeCategory::Lunch => "lunch",
            TimeCategory::Afternoon => "afternoon",
            TimeCategory::Evening => "evening",
            TimeCategory::Night => "night",
        }
    }
}

impl std::fmt::Display for TimeCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TimeCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "morning" => Ok(TimeCategory::Morning),
            "lunch" => Ok(TimeCategory::Lunch),
            "afternoon" => Ok(TimeCategory::Afternoon),
            "evening" => Ok(TimeCategory::Evening),
            "night" => Ok(TimeCategory::Night),
            other => Err(format!("unknown time category '{other}'")),
        }
    }
}

/// Time category of a simulated instant.
pub fn time_category_of(instant: &SimInstant) -> TimeCategory {
    TimeCategory::from_hour(instant.hour_of_day())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clock() -> SimClock {
        SimClock::new("2025-01-06T00:00:00Z".parse().unwrap())
    }

    #[test]
    fn test_category_examples() {
        let c = clock();
        // 09:00 -> morning, 12:30 -> lunch, 23:15 -> night
        assert_eq!(time_category_of(&c.at(9.0 * 3600.0)), TimeCategory::Morning);
        assert_eq!(
            time_category_of(&c.at(12.0 * 3600.0 + 1800.0)),
            TimeCategory::Lunch
        );
        assert_eq!(
            time_category_of(&c.at(23.0 * 3600.0 + 900.0)),
            TimeCategory::Night
        );
    }

    #[test]
    fn test_category_total_over_24_hours() {
        for hour in 0..24u32 {
            let cat = TimeCategory::from_hour(hour);
            let expected = match hour {
                6..=10 => TimeCategory::Morning,
                11..=13 => TimeCategory::Lunch,
                14..=17 => TimeCategory::Afternoon,
                18..=21 => TimeCategory::Evening,
                _ => TimeCategory::Night,
            };
            assert_eq!(cat, expected, "hour {hour}");
        }
    }

    #[test]
    fn test_boundaries_map_to_exactly_one_category() {
        // Each boundary hour belongs to the interval it opens.
        assert_eq!(TimeCategory::from_hour(6), TimeCategory::Morning);
        assert_eq!(TimeCategory::from_hour(11), TimeCategory::Lunch);
        assert_eq!(TimeCategory::from_hour(14), TimeCategory::Afternoon);
        assert_eq!(TimeCategory::from_hour(18), TimeCategory::Evening);
        assert_eq!(TimeCategory::from_hour(22), TimeCategory::Night);
        assert_eq!(TimeCategory::from_hour(0), TimeCategory::Night);
    }

    #[test]
    fn test_instant_wall_derivation() {
        let c = clock();
        let i = c.at(3600.0);
        assert_eq!(i.wall.to_rfc3339(), "2025-01-06T01:00:00+00:00");
        assert_eq!(i.offset_s, 3600.0);
        let sub = c.at(0.1);
        assert_eq!(sub.wall.timestamp_subsec_millis(), 100);
    }

    #[test]
    fn test_instant_ordering() {
        let c = clock();
        assert!(c.at(1.0) < c.at(2.0));
        assert!(c.at(2.0) == c.at(2.0));
    }
}
