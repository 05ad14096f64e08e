use super::FrontPartition;
use crate::types::Individual;

/// Assigns crowding distances front by front.
///
/// Per objective, the front is ordered by that objective (ties by id), the
/// two extremes get `+inf` and each interior member accumulates the gap
/// between its neighbours normalized by the front's range. An objective
/// whose range within the front is zero contributes nothing.
pub fn crowding_distance(members: &mut [Individual], partition: &FrontPartition) {
    for front in &partition.fronts {
        for &i in front {
            debug_assert!(members[i].rank.is_some(), "crowding requires ranks");
            members[i].crowding = Some(0.0);
        }
        if front.len() <= 2 {
            for &i in front {
                members[i].crowding = Some(f64::INFINITY);
            }
            continue;
        }
        let m = members[front[0]].objectives().len();
        let mut order = front.clone();
        for k in 0..m {
            order.sort_by(|&a, &b| {
                let fa = members[a].objectives()[k];
                let fb = members[b].objectives()[k];
                fa.total_cmp(&fb).then(members[a].id.cmp(&members[b].id))
            });
            let first = order[0];
            let last = order[order.len() - 1];
            let lo = members[first].objectives()[k];
            let hi = members[last].objectives()[k];
            members[first].crowding = Some(f64::INFINITY);
            members[last].crowding = Some(f64::INFINITY);
            let range = hi - lo;
            if range <= 0.0 {
                continue;
            }
            for w in order.windows(3) {
                let gap = members[w[2]].objectives()[k] - members[w[0]].objectives()[k];
                let c = members[w[1]].crowding.as_mut().expect("initialized above");
                *c += gap / range;
            }
        }
    }
}
