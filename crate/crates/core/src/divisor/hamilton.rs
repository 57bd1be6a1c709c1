use crate::problem::{compute_quota, Allocation, Problem};

/// Largest remainders: floors, then one seat each to the `r′` states with
/// the largest fractional quotas. Equal remainders go to the larger
/// population, then the earlier state.
pub fn hamilton_apportion(problem: &Problem) -> Allocation {
    let quota = compute_quota(problem);
    let mut order: Vec<usize> = (0..problem.num_states()).collect();
    let frac = quota.fractional();
    let pops = problem.populations();
    order.sort_by(|&i, &j| {
        frac[j]
            .cmp(&frac[i])
            .then(pops[j].cmp(&pops[i]))
            .then(i.cmp(&j))
    });
    let mut seats = quota.floors().to_vec();
    for &i in order.iter().take(quota.residual_seats() as usize) {
        seats[i] += 1;
    }
    Allocation::new(seats, "hamilton")
}
