//! K-tracking between leader and challenger.

/// Leadership counts `L_a` and per-leader pull counts `N^a_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackingState {
    arms: usize,
    leader_counts: Vec<u64>,
    pulls_under: Vec<u64>,
}

impl TrackingState {
    pub fn new(arms: usize) -> Self {
        Self {
            arms,
            leader_counts: vec![0; arms],
            pulls_under: vec![0; arms * arms],
        }
    }

    /// `L_a`: rounds in which `a` was the leader.
    pub fn leader_count(&self, arm: usize) -> u64 {
        self.leader_counts[arm]
    }

    /// `N^leader_arm`: pulls of `arm` in rounds led by `leader`.
    pub fn pulls_under(&self, leader: usize, arm: usize) -> u64 {
        self.pulls_under[leader * self.arms + arm]
    }

    pub fn total_leaderships(&self) -> u64 {
        self.leader_counts.iter().sum()
    }

    /// `N^a_a - β L_a`.
    pub fn deviation(&self, arm: usize, beta: f64) -> f64 {
        self.pulls_under(arm, arm) as f64 - beta * self.leader_count(arm) as f64
    }

    /// Starts a round led by `leader`: increments `L_leader` and returns the
    /// arm to pull. The increment precedes the test so that the comparison
    /// reads the post-round leadership count.
    pub fn begin_round(&mut self, leader: usize, challenger: usize, beta: f64) -> usize {
        self.leader_counts[leader] += 1;
        tracking_choice(self, leader, challenger, beta)
    }

    /// Records the pull chosen in the current round.
    pub fn finish_round(&mut self, leader: usize, pulled: usize) {
        self.pulls_under[leader * self.arms + pulled] += 1;
    }
}

/// Leader if `N^B_B ≤ β L_B`, challenger otherwise. `L_B` must already
/// include the current round.
pub fn tracking_choice(tracking: &TrackingState, leader: usize, challenger: usize, beta: f64) -> usize {
    if tracking.pulls_under(leader, leader) as f64 <= beta * tracking.leader_count(leader) as f64 {
        leader
    } else {
        challenger
    }
}
