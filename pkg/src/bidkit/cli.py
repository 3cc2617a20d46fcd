"""Command-line interface: deal, solve, policy, search, train, iterate,
evaluate, and serve subcommands."""

from __future__ import annotations

import logging
import sys

import click
import numpy as np

from . import dd, evaluation, training
from .auction import call_name, legal_calls, replay
from .cards import (SEAT_NAMES, card_name, new_deal, read_deal_file,
                    write_deal_file)
from .encoder import encode
from .policy import HeuristicPolicy, legal_mask, resolve_policy, save_weights
from .search import (SearchParams, TableConfig, TEST_PRESET, TRAINING_PRESET,
                     borel_search_detail)


@click.group()
@click.option("--verbose", is_flag=True, help="Enable info logging.")
def main(verbose):
    """bidkit: contract-bridge bidding engine and research harness."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s")


@main.command()
@click.option("--seed", type=int, default=0, help="Deal RNG seed.")
@click.option("--count", type=int, default=1, help="Number of deals.")
@click.option("--dd-tables", is_flag=True,
              help="Solve and attach the 20-entry double-dummy table.")
@click.option("--out", type=click.Path(), default=None,
              help="Write a deal file instead of printing.")
def deal(seed, count, dd_tables, out):
    """Generate random deals."""
    rng = np.random.default_rng(seed)
    deals = []
    for _ in range(count):
        d = new_deal(rng)
        if dd_tables:
            d = d.with_dd_table(dd.dd_table(d))
        deals.append(d)
    if out:
        write_deal_file(out, deals, header=f"seed={seed} count={count}")
        click.echo(f"wrote {count} deals to {out}")
        return
    for d in deals:
        for p in range(4):
            click.echo(f"{SEAT_NAMES[p]}: " +
                       " ".join(card_name(c) for c in d.hand(p)))
        if d.dd_table is not None:
            click.echo("DD table (C,D,H,S,NT x N,E,S,W): " +
                       " ".join(str(t) for t in d.dd_table))
        click.echo("")


@main.command()
@click.option("--deals", "deal_path", type=click.Path(exists=True),
              required=True, help="Deal file; first deal is solved.")
@click.option("--index", type=int, default=0, help="Deal index in the file.")
@click.option("--strain", type=click.Choice(["C", "D", "H", "S", "NT", "all"]),
              default="all")
def solve(deal_path, index, strain):
    """Double-dummy solve a deal from a deal file."""
    d = read_deal_file(deal_path)[index]
    strains = range(5) if strain == "all" else \
        [["C", "D", "H", "S", "NT"].index(strain)]
    names = ["C", "D", "H", "S", "NT"]
    for s in strains:
        tricks = [str(dd.deal_dd_tricks(d, s, p)) for p in range(4)]
        click.echo(f"{names[s]:>2}: " + " ".join(
            f"{SEAT_NAMES[p]}={tricks[p]}" for p in range(4)))


@main.command()
@click.option("--weights", type=click.Path(exists=True), default=None,
              help="Weight file; defaults to the heuristic policy.")
@click.option("--deals", "deal_path", type=click.Path(exists=True),
              required=True)
@click.option("--index", type=int, default=0)
@click.option("--auction", default="", help="Auction prefix, e.g. 'P 1C P'.")
def policy(weights, deal_path, index, auction):
    """Print the 38 call probabilities at a decision point."""
    from .auction import call_from_name

    d = read_deal_file(deal_path)[index]
    history = [call_from_name(t) for t in auction.split()]
    state = replay(history)
    pol = resolve_policy(weights) if weights else HeuristicPolicy()
    features = encode(state, d, state.to_act)
    mask = legal_mask(legal_calls(state))
    dist = pol.evaluate(features, mask)
    for c in np.argsort(-dist):
        if dist[c] > 0:
            click.echo(f"{call_name(int(c)):>4} {dist[c]:.6f}")


def _preset(name, t, r_min, r_max, p_max):
    params = {"training": TRAINING_PRESET, "test": TEST_PRESET}[name]
    overrides = {k: v for k, v in
                 [("t", t), ("r_min", r_min), ("r_max", r_max),
                  ("p_max", p_max)] if v is not None}
    if overrides:
        from dataclasses import replace
        params = replace(params, **overrides)
    return params


@main.command()
@click.option("--deals", "deal_path", type=click.Path(exists=True),
              required=True)
@click.option("--index", type=int, default=0)
@click.option("--auction", default="", help="Auction prefix before the search.")
@click.option("--seats", default="heuristic,heuristic,heuristic,heuristic",
              help="Comma-separated per-seat rollout policy specs "
                   "(weight paths, 'heuristic', or 'uniform').")
@click.option("--prior", "prior_spec", default=None,
              help="Searcher prior policy spec; defaults to its seat policy.")
@click.option("--preset", type=click.Choice(["training", "test"]),
              default="training")
@click.option("--t", type=float, default=None)
@click.option("--r-min", type=int, default=None)
@click.option("--r-max", type=int, default=None)
@click.option("--p-max", type=int, default=None)
@click.option("--seed", type=int, default=0)
def search(deal_path, index, auction, seats, prior_spec, preset, t, r_min,
           r_max, p_max, seed):
    """Run the particle search at one decision point and print the
    posterior."""
    from .auction import call_from_name

    d = read_deal_file(deal_path)[index]
    history = [call_from_name(tok) for tok in auction.split()]
    state = replay(history)
    searcher = state.to_act
    rollout = tuple(resolve_policy(s.strip()) for s in seats.split(","))
    prior_policy = resolve_policy(prior_spec) if prior_spec \
        else rollout[searcher]
    features = encode(state, d, searcher)
    mask = legal_mask(legal_calls(state))
    prior = prior_policy.evaluate(features, mask)
    params = _preset(preset, t, r_min, r_max, p_max)
    result = borel_search_detail(tuple(history), d.hand(searcher), prior,
                                 TableConfig(rollout), params, seed)
    click.echo(f"searcher={SEAT_NAMES[searcher]} R={result.rollouts} "
               f"P={result.particles}")
    for call, v in zip(result.candidates, result.values):
        click.echo(f"candidate {call_name(call):>4}: V={v:.1f} "
                   f"prior={prior[call]:.4f} "
                   f"posterior={result.posterior[call]:.4f}")
    for c in np.argsort(-result.posterior):
        if result.posterior[c] > 0:
            click.echo(f"{call_name(int(c)):>4} {result.posterior[c]:.6f}")


@main.command()
@click.option("--experience", type=click.Path(exists=True), required=True,
              help="Experience file to train on.")
@click.option("--steps", type=int, default=2000)
@click.option("--seed", type=int, default=0)
@click.option("--weights", type=click.Path(exists=True), default=None,
              help="Initial weights; fresh initialization when omitted.")
@click.option("--out", type=click.Path(), required=True,
              help="Output weight file.")
def train(experience, steps, seed, weights, out):
    """Imitation-train a network on an experience file."""
    dataset = training.read_experience(experience)
    rng = np.random.default_rng(seed)
    init = resolve_policy(weights).weights if weights else None
    hp = training.Hyperparams(steps=steps)
    result = training.imitation_train(dataset, hp, rng, init=init)
    save_weights(out, result)
    acc = training.training_accuracy(result, dataset)
    click.echo(f"trained {steps} steps on {len(dataset)} examples; "
               f"training accuracy {acc:.3f}; wrote {out}")


@main.command()
@click.option("--config", type=click.Path(exists=True), default=None,
              help="key=value iteration config file.")
@click.option("--task", type=click.Choice(["compatible", "partnership"]),
              default=None)
@click.option("--generations", type=int, default=None)
@click.option("--deals", "deals_per_gen", type=int, default=None)
@click.option("--r-max", type=int, default=None)
@click.option("--p-max", type=int, default=None)
@click.option("--train-steps", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--weights", type=click.Path(exists=True), default=None,
              help="Initial learner weights.")
@click.option("--out", type=click.Path(), required=True,
              help="Directory for per-generation snapshots.")
def iterate(config, task, generations, deals_per_gen, r_max, p_max,
            train_steps, seed, weights, out):
    """Run search-driven policy iteration from the heuristic baseline."""
    import os
    from dataclasses import replace

    cfg = training.read_config(config) if config else training.IterationConfig()
    for key, value in [("task", task), ("generations", generations),
                       ("deals_per_generation", deals_per_gen),
                       ("train_steps", train_steps), ("seed", seed)]:
        if value is not None:
            cfg = replace(cfg, **{key: value})
    params = cfg.params
    if r_max is not None:
        params = replace(params, r_max=r_max)
    if p_max is not None:
        params = replace(params, p_max=p_max)
    cfg = replace(cfg, params=params)
    os.makedirs(out, exist_ok=True)
    training.write_config(f"{out}/config.txt", cfg)
    baseline = HeuristicPolicy()
    initial = resolve_policy(weights).weights if weights else None
    snapshots = training.policy_iteration(baseline, cfg, out_dir=out,
                                          initial=initial)
    click.echo(f"wrote {len(snapshots)} generation snapshots to {out}")


@main.command()
@click.option("--deals", "deal_path", type=click.Path(exists=True),
              required=True)
@click.option("--metric", type=click.Choice(["team", "compatible"]),
              default="team")
@click.option("--agent", default="heuristic", help="Agent policy spec.")
@click.option("--baseline", default="heuristic", help="Baseline policy spec.")
@click.option("--seed", type=int, default=None,
              help="Sample agent actions with this seed (default greedy).")
@click.option("--out", type=click.Path(), default=None, help="CSV output.")
def evaluate(deal_path, metric, agent, baseline, seed, out):
    """Paired-deal evaluation of an agent against a baseline."""
    deals = read_deal_file(deal_path)
    report = evaluation.evaluate_set(
        deals, metric, resolve_policy(agent), resolve_policy(baseline),
        rng_seed=seed, csv_path=out)
    click.echo(report.summary())


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=None,
              help="Defaults to $BIDKIT_PORT or 8000.")
@click.option("--log-dir", type=click.Path(), default=None,
              help="Directory for session event logs.")
def serve(host, port, log_dir):
    """Run the HTTP session service."""
    from .service import serve as run

    run(host=host, port=port, log_dir=log_dir)


if __name__ == "__main__":
    main(prog_name="bidkit")
