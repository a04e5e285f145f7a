// The draggable preference square. Dragging the handle updates the state,
// re-labels the four corner percentages, and notifies the app so it can
// re-query the route.

import {
  FACTOR_ORDER,
  type Factor,
  type SquareState,
  clampState,
  roundWeights,
  squareToWeights,
  type Weights,
} from "./square.js";

const CORNER_LABELS: Record<Factor, string> = {
  duration: "Fast",
  slope: "Flat",
  amenity: "Amenities",
  comfort: "Comfort",
};

export class SquareWidget {
  private state: SquareState = { x: 0.5, y: 0.5 };
  private readonly handle: HTMLDivElement;
  private readonly labels = new Map<Factor, HTMLSpanElement>();
  private dragging = false;

  constructor(
    private readonly container: HTMLElement,
    private readonly onChange: (weights: Weights) => void,
  ) {
    container.classList.add("square-widget");
    for (const factor of FACTOR_ORDER) {
      const label = document.createElement("span");
      label.className = `corner corner-${factor}`;
      this.labels.set(factor, label);
      container.append(label);
    }
    this.handle = document.createElement("div");
    this.handle.className = "square-handle";
    container.append(this.handle);

    container.addEventListener("pointerdown", (e) => {
      this.dragging = true;
      this.moveTo(e);
    });
    container.addEventListener("pointermove", (e) => {
      if (this.dragging) this.moveTo(e);
    });
    container.addEventListener("pointerup", () => {
      this.dragging = false;
    });
    this.render();
  }

  getState(): SquareState {
    return { ...this.state };
  }

  getWeights(): Weights {
    return roundWeights(squareToWeights(this.state));
  }

  setState(state: SquareState): void {
    this.state = clampState(state);
    this.render();
    this.onChange(this.getWeights());
  }

  private moveTo(e: PointerEvent): void {
    const rect = this.container.getBoundingClientRect();
    const width = rect.width || 1;
    const height = rect.height || 1;
    this.setState({
      x: (e.clientX - rect.left) / width,
      // Screen y grows downward; the widget's y grows upward toward
      // the amenity/comfort corners.
      y: 1 - (e.clientY - rect.top) / height,
    });
  }

  private render(): void {
    this.handle.style.left = `${(this.state.x * 100).toFixed(1)}%`;
    this.handle.style.bottom = `${(this.state.y * 100).toFixed(1)}%`;
    const weights = this.getWeights();
    for (const factor of FACTOR_ORDER) {
      const label = this.labels.get(factor)!;
      label.textContent = `${CORNER_LABELS[factor]} ${weights[factor]}%`;
    }
  }
}
