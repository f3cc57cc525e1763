use chopsim::config::SimConfig;
use chopsim::planner::*;
use chopsim::rng::child_seed;
use chopsim::scene::*;

fn main() {
    let cfg = SimConfig::perfect();
    let templates = TemplateSet::standard();
    let trial = child_seed(99, 465); // trial index i incremented before use: i=466 printed => trial index 465
    let scene = generate_scene(&cfg.scene_gen, &templates, child_seed(trial, 0)).unwrap();
    let goal = parse_goal("cucumber=8:long").unwrap();
    let ep = run_episode(&scene, &goal, &cfg, &templates, child_seed(trial, 2), &mut NullProbe).unwrap();
    println!("success={}", ep.success);
    for e in ep.trace.events.iter() {
        println!("{}", serde_json::to_string(e).unwrap());
    }
}
