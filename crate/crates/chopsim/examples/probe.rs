use chopsim::config::SimConfig;
use chopsim::planner::*;
use chopsim::primitives::CutStyle;
use chopsim::rng::{child_seed, rng_from_seed};
use chopsim::scene::*;
use rand::Rng;

fn random_goal(scene: &Scene, rng: &mut chopsim::rng::SimRng) -> Option<GoalSpec> {
    let mut present: Vec<FoodClass> = FoodClass::ALL
        .into_iter()
        .filter(|&c| scene.count_of(c) > 0)
        .collect();
    if present.is_empty() {
        return None;
    }
    // pick 1..=present.len() classes
    let k = rng.random_range(1..=present.len());
    let mut entries = Vec::new();
    let mut budget: u32 = 12;
    for _ in 0..k {
        let i = rng.random_range(0..present.len());
        let class = present.remove(i);
        let have = scene.count_of(class) as u32;
        if have >= budget { continue; }
        let extra = rng.random_range(0..=(budget - have).min(4));
        let target = have + extra;
        if target < 1 { continue; }
        budget = budget.saturating_sub(target);
        let style = if rng.random::<bool>() { CutStyle::Even } else { CutStyle::Long };
        entries.push(GoalEntry { class, target_count: target, style });
    }
    if entries.is_empty() { return None; }
    Some(GoalSpec { entries })
}

fn main() {
    let cfg = SimConfig::perfect();
    let templates = TemplateSet::standard();
    let mut fails = 0;
    let mut n = 0;
    let start = std::time::Instant::now();
    let mut i = 0u64;
    while n < 500 {
        let trial = child_seed(99, i);
        i += 1;
        let Ok(scene) = generate_scene(&cfg.scene_gen, &templates, child_seed(trial, 0)) else { continue };
        let mut rng = rng_from_seed(child_seed(trial, 1));
        let Some(goal) = random_goal(&scene, &mut rng) else { continue };
        if goal.total_target() as usize <= scene.objects.len() { /* may be trivial; keep anyway */ }
        n += 1;
        let ep = run_episode(&scene, &goal, &cfg, &templates, child_seed(trial, 2), &mut NullProbe).unwrap();
        if !ep.success {
            fails += 1;
            println!("FAIL at trial {i}: goal={goal} objects={} reason={:?}", scene.objects.len(),
                ep.trace.events.last());
        }
        // ground-truth exactness on success
        if ep.success {
            for e in &goal.entries {
                assert!(ep.final_scene.count_of(e.class) >= e.target_count as usize,
                    "trial {i}: class {} has {} < {}", e.class, ep.final_scene.count_of(e.class), e.target_count);
            }
        }
    }
    println!("{n} episodes, {fails} failures, {:.1}s", start.elapsed().as_secs_f64());
}
