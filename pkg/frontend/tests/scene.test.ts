import { describe, expect, it } from "vitest";
import {
  SceneFormatError,
  decodeScene,
  kindForEntity,
  modelForEntity,
  presentLayers,
} from "../src/scene";
import { fixtureText, mutated } from "./helpers";

const FIXTURES = [
  "pickup.scene.json",
  "toss.scene.json",
  "draw.scene.json",
  "hand100-d1.scene.json",
  "hand100-d01.scene.json",
  "nofine.scene.json",
];

describe("entity naming", () => {
  it("classifies canonical ids", () => {
    expect(kindForEntity("left_hand")).toBe("hand");
    expect(kindForEntity("right_hand")).toBe("hand");
    expect(kindForEntity("object:ball")).toBe("object");
    expect(kindForEntity("object:pen")).toBe("object");
    expect(kindForEntity("head")).toBeNull();
    expect(kindForEntity("Object:ball")).toBeNull();
  });

  it("maps entities to models", () => {
    expect(modelForEntity("left_hand", "hand")).toBe("hand_left");
    expect(modelForEntity("right_hand", "hand")).toBe("hand_right");
    expect(modelForEntity("object:pen", "object")).toBe("object_pen");
    expect(modelForEntity("object:ball", "object")).toBe("object_sphere");
    expect(modelForEntity("object:cube", "object")).toBe("object_sphere");
  });
});

describe("decodeScene on served documents", () => {
  it.each(FIXTURES)("decodes %s", (name) => {
    const doc = decodeScene(fixtureText(name));
    expect(doc.version).toBe(1);
    expect(doc.meta.convention).toBe("rh-yup-m");
    expect(doc.meta.duration).toBeGreaterThan(0);
    expect(doc.entities.length).toBeGreaterThan(0);
    expect(doc.tMax - doc.tMin).toBe(doc.meta.duration);
  });

  it("reads the full pickup scene shape", () => {
    const doc = decodeScene(fixtureText("pickup.scene.json"));
    expect(presentLayers(doc)).toEqual(new Set(["gm", "avatar", "fine"]));
    expect(doc.entities.map((e) => e.id)).toEqual(["object:cube", "right_hand"]);
    expect(doc.staging).toEqual([["avatar", "gm"], ["fine"]]);
    expect(doc.gm!.map((l) => l.entityId)).toEqual(["object:cube", "right_hand"]);
    expect(doc.gm![0].vertices).toHaveLength(91);
    expect(doc.avatar![1].modelId).toBe("hand_right");
    expect(Object.keys(doc.fine!)).toEqual(["right_hand"]);
    expect(doc.fine!["right_hand"]).toHaveLength(91);
    expect(doc.tMin).toBe(0);
    expect(doc.tMax).toBe(3);
  });

  it("keeps trajectory colors: hands blue, objects red", () => {
    const doc = decodeScene(fixtureText("pickup.scene.json"));
    const hand = doc.gm!.find((l) => l.entityId === "right_hand")!;
    const cube = doc.gm!.find((l) => l.entityId === "object:cube")!;
    expect(hand.color.slice(0, 3)).toEqual([0, 0, 1]);
    expect(cube.color.slice(0, 3)).toEqual([1, 0, 0]);
    expect(hand.opacity).toBeGreaterThan(0);
    expect(hand.opacity).toBeLessThan(1);
  });

  it("decodes a scene without the fine layer", () => {
    const doc = decodeScene(fixtureText("nofine.scene.json"));
    expect(presentLayers(doc)).toEqual(new Set(["gm", "avatar"]));
    expect(doc.fine).toBeNull();
    expect(doc.staging).toEqual([["avatar", "gm"]]);
  });
});

describe("decodeScene rejections", () => {
  const cases: [string, string][] = [
    ["corrupt bytes", "{not json"],
    ["top-level array", "[1,2,3]"],
    ["missing key", mutated("pickup.scene.json", (d) => delete d.staging)],
    ["wrong version", mutated("pickup.scene.json", (d) => (d.version = 2))],
    [
      "unknown layer",
      mutated("pickup.scene.json", (d) => (d.layers.extra = [])),
    ],
    [
      "short position vector",
      mutated("pickup.scene.json", (d) => d.layers.gm[0].vertices[0].position.pop()),
    ],
    [
      "non-finite number",
      mutated("pickup.scene.json", (d) => (d.meta.duration = null)).replace(
        '"duration":null',
        '"duration":1e999',
      ),
    ],
    [
      "opacity not translucent",
      mutated("pickup.scene.json", (d) => (d.layers.gm[0].opacity = 1.0)),
    ],
    [
      "color out of range",
      mutated("pickup.scene.json", (d) => (d.entities[0].color = [2, 0, 0, 1])),
    ],
    [
      "non-unit arrow",
      mutated("pickup.scene.json", (d) => (d.layers.fine.right_hand[0].arrow = [0, 0, 0.5])),
    ],
    [
      "non-positive arrow length",
      mutated("pickup.scene.json", (d) => (d.layers.fine.right_hand[0].arrow_len = 0)),
    ],
    [
      "duplicate entity declarations",
      mutated("pickup.scene.json", (d) => d.entities.push(d.entities[0])),
    ],
    [
      "entity kind mismatch",
      mutated("pickup.scene.json", (d) => {
        d.entities.find((e: any) => e.id === "right_hand").kind = "object";
      }),
    ],
    [
      "undeclared gm entity",
      mutated("pickup.scene.json", (d) => (d.layers.gm[0].entity_id = "object:ghost")),
    ],
    [
      "model inconsistent with entity",
      mutated("pickup.scene.json", (d) => {
        d.layers.avatar.find((a: any) => a.entity_id === "right_hand").model_id =
          "object_sphere";
      }),
    ],
    [
      "unknown model id",
      mutated("pickup.scene.json", (d) => (d.layers.avatar[0].model_id = "robot")),
    ],
    [
      "non-increasing vertex times",
      mutated("pickup.scene.json", (d) => (d.layers.gm[0].vertices[1].t = 0)),
    ],
    [
      "staging not covering layers",
      mutated("pickup.scene.json", (d) => (d.staging = [["avatar", "gm"]])),
    ],
    [
      "staging overlap",
      mutated("pickup.scene.json", (d) => (d.staging = [["avatar", "gm"], ["gm", "fine"]])),
    ],
    [
      "fine staged before gm/avatar",
      mutated("pickup.scene.json", (d) => (d.staging = [["fine"], ["avatar", "gm"]])),
    ],
    [
      "duration span mismatch",
      mutated("pickup.scene.json", (d) => (d.meta.duration = 2.5)),
    ],
  ];

  it.each(cases)("rejects %s", (_label, text) => {
    expect(() => decodeScene(text)).toThrow(SceneFormatError);
  });

  it("reports what failed", () => {
    expect(() => decodeScene("{not json")).toThrow(/invalid JSON/);
    expect(() =>
      decodeScene(mutated("pickup.scene.json", (d) => (d.version = 3))),
    ).toThrow(/unsupported version 3/);
    expect(() =>
      decodeScene(mutated("pickup.scene.json", (d) => (d.staging = [["fine"], ["avatar", "gm"]]))),
    ).toThrow(/strictly after/);
  });
});
