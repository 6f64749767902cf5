"""A tour of the Hungry-Thirsty gridworld.

The agent lives on a 4x4 grid with blocked edges. Food and water sit in two
corners. Eating only works on the food tile while not thirsty; drinking only
works on the water tile; after a drink, thirst returns with probability 0.1
each later step. Fitness counts the steps spent not hungry out of 200.
"""

import random

from livetune.hungry_thirsty import (
    Action,
    GridConfig,
    HungryThirsty,
    RewardVector,
    discounted_return,
    fitness,
)

config = GridConfig(food_corner=(0, 3), water_corner=(3, 3), seed=4)
env = HungryThirsty(config)
rewards = RewardVector()  # defaults: R1=1.0, R2=-0.1, R3=0.3, R4=-1.0


def render(state) -> str:
    rows = []
    for y in range(4):
        cells = []
        for x in range(4):
            if (x, y) == state.pos:
                cells.append("A")
            elif (x, y) == env.food_corner:
                cells.append("F")
            elif (x, y) == env.water_corner:
                cells.append("W")
            else:
                cells.append(".")
        rows.append(" ".join(cells))
    flags = f"H={'y' if state.hungry else 'n'} T={'y' if state.thirsty else 'n'}"
    return "\n".join(rows) + f"\n{flags} step={state.step_count}"


state = env.reset()
print("initial state (A=agent, F=food, W=water):")
print(render(state))

print("\nwalking a scripted loop: down to the water, drink, across to the food, eat...")
script = [Action.DOWN, Action.DOWN, Action.DOWN, Action.RIGHT, Action.RIGHT]
script += [Action.DRINK, Action.LEFT, Action.LEFT, Action.LEFT, Action.EAT, Action.EAT]
states, rewards_seen = [], []
for action in script:
    state, reward, done = env.step(state, action, rewards)
    states.append(state)
    rewards_seen.append(reward)
    print(f"  {action.name:<6} -> pos={state.pos} H={state.hungry} T={state.thirsty} r={reward:+.1f}")

print(f"\nfitness so far: {fitness(states)} (steps not hungry)")
print(f"discounted return (gamma=0.99): {discounted_return(rewards_seen, 0.99):.3f}")

print("\nnow a full random-policy episode:")
rng = random.Random(0)
state = env.reset()
states, rewards_seen = [], []
done = False
while not done:
    state, reward, done = env.step(state, rng.choice(list(Action)), rewards)
    states.append(state)
    rewards_seen.append(reward)
print(f"random policy fitness: {fitness(states)} / 200")
print(f"random policy return:  {discounted_return(rewards_seen, 0.99):.2f}")
print("(a random walker almost never manages the drink-then-eat dance)")
